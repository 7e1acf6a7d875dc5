#!/usr/bin/env python3
"""Smoke test for the gamemanip_py extension module.

Builds nothing itself: run `cargo build -p gamemanip-py` (or --release)
first, then `python3 python/smoke_test.py`. The script locates the compiled
cdylib under target/, links it into a temp directory under the importable
name, and exercises the bindings end to end.
"""

import json
import os
import shutil
import sys
import tempfile


def locate_cdylib():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(root, "target"))
    candidates = [
        os.path.join(target, profile, name)
        for profile in ("release", "debug")
        for name in ("libgamemanip_py.so", "libgamemanip_py.dylib", "gamemanip_py.dll")
    ]
    for path in candidates:
        if os.path.exists(path):
            return path
    sys.exit("no compiled module found; run `cargo build -p gamemanip-py` first")


def import_module():
    src = locate_cdylib()
    staging = tempfile.mkdtemp(prefix="gamemanip_py_")
    suffix = ".pyd" if src.endswith(".dll") else ".so"
    shutil.copy2(src, os.path.join(staging, "gamemanip_py" + suffix))
    sys.path.insert(0, staging)
    import gamemanip_py

    return gamemanip_py


def main():
    gm = import_module()
    print(f"gamemanip_py {gm.__version__} loaded")

    base = gm.Game(["T", "B"], ["L", "R"], [[4, 9], [5, 10]], [[14, 13], [6, 10]])
    assert base.pure_nash() == [("B", "R")]
    assert base.payoff("B", "R", "Row") == "10"
    assert base.payoff("T", "L", "Col") == "14"
    assert base.dominated("Row") == ["T"]
    print("base game: unique equilibrium (B, R), Top dominated")

    offer = gm.Offer("M1", "Row", 3, 2, "T")
    accepted = base.apply_accept(offer)
    assert accepted.pure_nash() == [("B", "R")]
    assert accepted.payoff("B", "R", "M1") == "3"
    declined = base.apply_decline(offer)
    assert declined.pure_nash() == [("T", "L")]
    assert declined.payoff("T", "L", "M1") == "-2"
    print("offer transforms: accept keeps (B, R), decline shifts to (T, L)")

    checks = json.loads(gm.check_report(base, offer, 2, "R"))
    assert checks["primary"]["all"] is True
    assert checks["counter"]["all"] is True

    solution = json.loads(gm.stage_solution(base, offer))
    assert solution["spe"]["decision"] == "Accept"
    assert solution["spe"]["payoffs"]["Row"] == 7
    assert solution["classification"]["w"] == "lose"
    print("stage solution: Accept then (B, R); the targeted player loses")

    # Fractional payoffs stay exact across the boundary.
    scaled = gm.Game(["a"], ["x"], [["2/5"]], [["-1/3"]])
    assert scaled.payoff("a", "x", "Row") == "2/5"
    assert json.loads(scaled.to_json())["row_payoffs"] == [["2/5"]]

    # Round-trip through JSON documents.
    again = gm.Game.from_json(declined.to_json())
    assert again.pure_nash() == [("T", "L")]

    # A quick dynamics run: learned play declines the offer even though
    # backward induction says accept.
    report = json.loads(gm.scenario_report(2, steps=20000, horizon=300.0))
    assert report["tables_match"] is True
    assert report["spe"]["decision"] == "Accept"
    assert report["spe_vs_dynamics"] == "disagree"
    for verdict in (report["mwua_verdict"], report["replicator_verdict"]):
        assert verdict["converged"] is True
        assert verdict["induced_play"]["decision"] == "Decline"
        assert (verdict["induced_play"]["row"], verdict["induced_play"]["col"]) == ("T", "L")
    print("scenario 2: dynamics decline while backward induction accepts")

    csv_a, sim_report = gm.simulate(base, "mwua", steps=500, mode="sampled", seed=42)
    csv_b, _ = gm.simulate(base, "mwua", steps=500, mode="sampled", seed=42)
    assert csv_a == csv_b, "sampled runs with one seed must match"
    assert csv_a.splitlines()[0] == "t,row:T,row:B,col:L,col:R,row_action,col_action"
    verdict = json.loads(sim_report)["verdict"]
    assert verdict["induced_play"] == {"decision": None, "row": "B", "col": "R"}
    print("simulate: deterministic sampled trajectories, play settles on (B, R)")

    print("OK: all smoke checks passed")


if __name__ == "__main__":
    main()
