"""Builds the extension module and exercises every binding once.

Usage: python3 python/smoke_test.py [--no-build]
"""

import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "crates" / "cli" / "tests" / "fixtures"


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "finconv-python", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )


def load(tmp):
    lib = ROOT / "target" / "release" / "libfinconv.so"
    shutil.copy(lib, pathlib.Path(tmp) / "finconv.so")
    sys.path.insert(0, tmp)
    import finconv

    return finconv


def text(name):
    return (FIXTURES / name).read_text()


def main():
    if "--no-build" not in sys.argv:
        build()
    with tempfile.TemporaryDirectory() as tmp:
        fc = load(tmp)

        assert fc.validate(text("p3.json")) == "convergence"
        try:
            fc.validate(text("corrupt.json"))
        except ValueError as e:
            assert "centered axiom violated at point a" in str(e), e
        else:
            raise AssertionError("corrupt document accepted")

        t = fc.reflect("T", text("p3.json"))
        assert t == json.loads(text("p3_topological.json"))

        r = fc.classify_map(text("identity.json"), text("p3.json"), json.dumps(t), witness=True)
        flags = r["flags"]
        assert flags["continuous"] and flags["quotient"] and flags["closed"]
        assert not (flags["hereditarily_quotient"] or flags["adherent"] or flags["open"])

        zero = text("zero.json")
        assert fc.check_compact(text("sierpinski.json"), zero, zero)

        assert fc.count(2) == 9
        assert fc.count(3, "pretopology") == 64
        assert fc.count(3, "topology") == 29
        assert len(fc.enumerate(2)) == 9
        assert fc.enumerate(3, sample=5, seed=7) == fc.enumerate(3, sample=5, seed=7)

        assert "closed-not-adherent" in fc.predicates()
        w = fc.search("closed-not-adherent")
        stored = ROOT / "crates" / "core" / "tests" / "fixtures" / "witnesses" / "closed-not-adherent.json"
        assert w == json.loads(stored.read_text())

        assert fc.laws(2)["passed"]
        assert fc.exemplar("fan")["passed"]
        assert fc.exemplar("prime")["passed"]
    print("python smoke test passed")


if __name__ == "__main__":
    main()
