"""Write the two shipped finite doctrines to doctrines/*.doc.

Regenerates the files the command-line examples and golden tests read;
run from the repository root after any change to the shipped tables.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from jreal.doctrine import shipped_d4, shipped_d8, show_doctrine  # noqa: E402


def main() -> None:
    out = pathlib.Path(__file__).resolve().parents[1] / "doctrines"
    out.mkdir(exist_ok=True)
    for name, d in (("d4", shipped_d4()), ("d8", shipped_d8())):
        path = out / f"{name}.doc"
        path.write_text(show_doctrine(d))
        print(f"wrote {path} (size {d.size})")


if __name__ == "__main__":
    main()
