#!/usr/bin/env python3
"""Smoke test for the hitstand_py extension module.

Build the module first:

    cargo build -p hitstand-py --release

then run this script from anywhere inside the repository.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path


def load_module():
    root = Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / "release" / "libhitstand_py.so",
        root / "target" / "debug" / "libhitstand_py.so",
        root / "target" / "release" / "libhitstand_py.dylib",
        root / "target" / "debug" / "libhitstand_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("build the extension first: cargo build -p hitstand-py --release")
    stage = Path(tempfile.mkdtemp(prefix="hitstand-py-"))
    shutil.copy2(built, stage / "hitstand_py.so")
    sys.path.insert(0, str(stage))
    import hitstand_py

    return hitstand_py


def main():
    hs = load_module()

    # stage 1: a fully known deal, exact fractions
    s1 = hs.stage1("A,2", "6,8")
    assert s1["stand"]["ev"] == "-1/24", s1["stand"]["ev"]
    assert s1["stand"]["p_win"] == "23/48"
    assert math.isclose(s1["hit"]["ev_decimal"], 167 / 752)

    # stage 2: the worked cell
    cell = hs.cell("soft13", "hard14")
    assert cell["ev_hit"] == "27679/115056", cell["ev_hit"]
    assert cell["ev_stand"] == "-2/51", cell["ev_stand"]
    assert cell["decision"] == "H" and not cell["asterisk"]

    # strategy tables: shape and a few known decisions
    table = hs.build_strategy_table()
    assert len(table) == 26 * 26
    assert table.decision("hard20", "hard4") == "S"
    assert table.decision("hard12", "hard14") == "H"
    assert table.cell("hard12", "hard14")["asterisk"]
    assert "| player |" in table.markdown()
    assert table.csv().count("\n") == 26 * 26 + 1

    no_up = hs.build_strategy_table(visibility="no-up")
    assert len(no_up) == 26
    assert no_up.decision("hard14") == "H"
    assert no_up.decision("hard15") == "S"

    # stage 3: exact overall metrics
    result = hs.overall(visibility="no-up")
    assert result["ev"] == "582521/65438100", result["ev"]
    assert math.isclose(result["ev_decimal"], 0.008902, abs_tol=5e-7)
    assert math.isclose(
        result["p_win_decimal"] + result["p_tie_decimal"] + result["p_loss_decimal"],
        1.0,
    )

    # simulation: seeded and deterministic
    a = hs.simulate(trials=20_000, seed=11)
    b = hs.simulate(trials=20_000, seed=11)
    assert a == b
    assert a["rng"] == "chacha8"
    assert a["wins"] + a["ties"] + a["losses"] == 20_000
    exact = hs.overall()
    assert abs(a["mean_payout"] - exact["ev_decimal"]) < 4 * a["std_error"] + 1e-9

    # deck sweep: gaps to the with-replacement limit shrink
    sweep = hs.sweep_decks([1, 4], visibility="no-up")
    gap = lambda row: abs(row["ev_decimal"] - sweep["limit"]["ev_decimal"])
    assert gap(sweep["per_n"][1]) < gap(sweep["per_n"][0])
    assert sweep["strategy_stabilized_at"] == 1

    # bad input surfaces as ValueError
    try:
        hs.cell("hard21", "hard14")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for hard21")

    print("smoke test passed")


if __name__ == "__main__":
    main()
