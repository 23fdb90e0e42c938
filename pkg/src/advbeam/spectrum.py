"""Approximate RGB rendering of monochromatic visible light."""

from __future__ import annotations

VISIBLE_MIN_NM = 380.0
VISIBLE_MAX_NM = 750.0

# Wavelengths where the piecewise-linear chroma or the edge intensity ramp
# changes slope.  Useful for continuity checks.
SEGMENT_BOUNDARIES_NM = (420.0, 440.0, 490.0, 510.0, 580.0, 645.0, 700.0)


def wavelength_to_rgb(nanometers: float, gamma: float = 0.8) -> tuple[float, float, float]:
    """Convert a visible wavelength to an (R, G, B) triple in [0, 1].

    Uses the common piecewise-linear visible-spectrum approximation with
    segment edges at 440/490/510/580/645 nm, an intensity factor that ramps
    0.3 -> 1.0 over 380-420 nm and 1.0 -> 0.3 over 700-750 nm, and gamma
    correction applied to the attenuated channels.

    Raises ValueError for wavelengths outside [380, 750] nm.
    """
    nm = float(nanometers)
    if not VISIBLE_MIN_NM <= nm <= VISIBLE_MAX_NM:
        raise ValueError(
            f"wavelength {nm} nm outside the visible range "
            f"[{VISIBLE_MIN_NM:.0f}, {VISIBLE_MAX_NM:.0f}]"
        )

    if nm < 440.0:
        r, g, b = (440.0 - nm) / 60.0, 0.0, 1.0
    elif nm < 490.0:
        r, g, b = 0.0, (nm - 440.0) / 50.0, 1.0
    elif nm < 510.0:
        r, g, b = 0.0, 1.0, (510.0 - nm) / 20.0
    elif nm < 580.0:
        r, g, b = (nm - 510.0) / 70.0, 1.0, 0.0
    elif nm < 645.0:
        r, g, b = 1.0, (645.0 - nm) / 65.0, 0.0
    else:
        r, g, b = 1.0, 0.0, 0.0

    if nm < 420.0:
        factor = 0.3 + 0.7 * (nm - 380.0) / 40.0
    elif nm <= 700.0:
        factor = 1.0
    else:
        factor = 0.3 + 0.7 * (750.0 - nm) / 50.0

    return tuple((channel * factor) ** gamma for channel in (r, g, b))
