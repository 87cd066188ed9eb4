"""Regenerate the committed modular-data fixtures in ``src/tvo/data``."""
from pathlib import Path

from tvo.fixtures import GENERATORS
from tvo.modular import save

OUT = Path(__file__).resolve().parent.parent / "src" / "tvo" / "data"

if __name__ == "__main__":
    for name, gen in GENERATORS.items():
        md = gen()
        save(md, OUT / f"{name}.json")
        print(f"wrote {name}.json  rank={md.rank}  params={md.provenance.get('parameters')}")
