"""Smoke test for the algebroid_forge_py extension.

Build it first, for example:
    maturin develop -m crates/py/Cargo.toml --features extension-module
or
    cargo build --release -p algebroid-forge-py --features extension-module
    cp target/release/libalgebroid_forge_py.so python/algebroid_forge_py.so
"""

import json
import sys

import algebroid_forge_py as af


def main() -> int:
    doc = json.loads(af.construct("A1", [1]))
    assert doc["valid"] is True, doc["criterion"]
    assert doc["dims"] == [3, 5]

    bad = json.loads(af.construct("A1", [2]))
    assert bad["valid"] is False

    report = json.loads(af.check(json.dumps(doc)))
    assert report["formulations_agree"] is True

    assert af.dims("A1", [1], max_degree=3, quotient=False) == [3, 5, 15, 30]
    assert af.dims("A1", [1], max_degree=3) == [3, 5, 10, 15]
    assert af.central_charge("A1", [1]) == "1"

    b = json.loads(af.borcherds("A1", [1], samples=30, seed=7))
    assert b["seed"] == 7

    try:
        af.construct("Q7", [1])
    except ValueError:
        pass
    else:
        raise AssertionError("unknown Lie type accepted")

    print("python smoke test: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
