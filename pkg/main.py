"""Run the sketchqr CLI from a source checkout: python main.py verify --only flop-model"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / "src"))

from sketchqr.cli.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
