"""Smoke test for the hammerforge Python bindings.

Install first: pip install --no-build-isolation ./crates/python
"""

from pathlib import Path

import hammerforge

MINI = (Path(__file__).resolve().parent.parent / "crates/core/tests/fixtures/mini.mg").read_text()


def main():
    report = hammerforge.check(MINI)
    assert report["errors"] == [], report["errors"]
    assert len(report["theorems"]) >= 12
    assert report["holes"] == 0

    bad = hammerforge.check("Theorem t : True.\nexact FalseE.\nQed.\n")
    assert bad["errors"] and bad["errors"][0]["line"] == 2, bad

    at = MINI.index("exact ordinal_ordsucc alpha Ha.")
    goal = hammerforge.goal_at(MINI, at)
    assert goal.endswith("ordinal (ordsucc alpha)"), goal
    assert "Ha" in goal
    assert hammerforge.goal_at(MINI, 0) is None

    problems = hammerforge.bushy(MINI)
    assert len(problems) >= 60
    pid, theorem, text = problems[0]
    assert pid.startswith("bushy_") and theorem and "thf(" in text

    assert hammerforge.mangle("ordinal_ordsucc") == "ordinal_5Fordsucc"
    assert hammerforge.unmangle("ordinal_5Fordsucc") == "ordinal_ordsucc"
    assert hammerforge.percent(32675, 41738) == "78.3%"
    assert hammerforge.percent(159363, 346152, 0) == "46%"

    try:
        hammerforge.check(MINI, basis="constructive")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown basis accepted")

    print("smoke test passed: %d theorems, %d problems" % (len(report["theorems"]), len(problems)))


if __name__ == "__main__":
    main()
