"""Regenerate tests/golden/ from the current CLI.

    python3 scripts/make_golden.py [case ...]

Review the diff before committing: golden files are the CLI contract.
"""

import shutil
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from golden_cases import CASES, GOLDEN, run_case  # noqa: E402


def main(names):
    for name in names or CASES:
        with tempfile.TemporaryDirectory() as tmp:
            code, files = run_case(name, Path(tmp) / "out")
        folder = GOLDEN / name
        shutil.rmtree(folder, ignore_errors=True)
        folder.mkdir(parents=True)
        for fname, text in files.items():
            (folder / fname).write_text(text)
        print(f"{code}  {name}  ({', '.join(files)})")


if __name__ == "__main__":
    main(sys.argv[1:])
