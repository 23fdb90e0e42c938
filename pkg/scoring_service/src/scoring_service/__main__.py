"""Run the scoring service: `python -m scoring_service` or `scoring-service`.

Configuration comes from environment variables: SCORING_MODEL (model file),
SCORING_LABELS, SCORING_INPUT_SIZE, SCORING_MEAN, SCORING_STD,
SCORING_MAX_BYTES, SCORING_HOST, SCORING_PORT.
"""

import os

import uvicorn

from .app import create_app


def main() -> int:
    app = create_app()
    uvicorn.run(
        app,
        host=os.environ.get("SCORING_HOST", "127.0.0.1"),
        port=int(os.environ.get("SCORING_PORT", "8700")),
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
