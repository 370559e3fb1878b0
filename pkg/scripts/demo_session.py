#!/usr/bin/env python3
"""Walk one tasting session through the HTTP API with a scripted respondent.

Runs the service in-process (no network), answers every A/B question the way
a person with a known preference surface would, and prints the shrinking
search region plus the final recommended recipe. State is persisted under a
temporary directory and the service is restarted halfway through to show
that sessions resume exactly.
"""

from __future__ import annotations

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fastapi.testclient import TestClient

from ordersearch.core import Point2
from ordersearch.oracles import builtin_function, scripted_respondent
from ordersearch.service import create_app

TIE_THRESHOLD = 0.05  # the respondent calls "tie" for near-equal drinks


def fmt_recipe(option: dict) -> str:
    r = option["recipe"]
    return f"citric {r['citric_acid_pct']:.3f}% / sugar {r['sugar_pct']:.2f}%"


def main() -> int:
    objective = builtin_function("preference_bump")  # tastiest drink at (2.2, 2.8)
    respond = scripted_respondent(objective, tie_threshold=TIE_THRESHOLD)

    with tempfile.TemporaryDirectory(prefix="tasting_") as state_dir:
        client = TestClient(create_app(state_dir))
        session_id = client.post("/sessions").json()["id"]
        print(f"session {session_id} (state dir {state_dir})")

        count = 0
        while True:
            question = client.get(f"/sessions/{session_id}/question").json()
            if question.get("status") == "complete":
                break
            if count == 5:
                print("--- restarting the service mid-session ---")
                client = TestClient(create_app(state_dir))
                resumed = client.get(f"/sessions/{session_id}/question").json()
                assert resumed == question, "resume must reproduce the question"
            a = Point2(*question["option_a"]["point"])
            b = Point2(*question["option_b"]["point"])
            answer = respond(a, b)
            summary = client.post(
                f"/sessions/{session_id}/answer",
                json={"token": question["token"], "preference": answer},
            ).json()
            count += 1
            region = summary["region"]
            print(
                f"{question['token']:>4}: A {fmt_recipe(question['option_a'])} "
                f"vs B {fmt_recipe(question['option_b'])} -> {answer:<3} "
                f"(region center {region['center']}, "
                f"half-size {region['half_width']} x {region['half_height']})"
            )

        state = client.get(f"/sessions/{session_id}/state").json()
        final = state["final"]
        print(f"\nfinished after {state['comparisons']} comparisons "
              f"({len(state['ties'])} ties)")
        print(f"recommended drink: {fmt_recipe(final)} at point {final['point']}")
        truth = objective.analytic_min[0]
        dist = Point2(*final["point"]).distance_to(truth)
        print(f"true optimum {truth.x, truth.y}; distance {dist:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
