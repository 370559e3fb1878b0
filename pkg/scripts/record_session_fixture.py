#!/usr/bin/env python3
"""Record a complete tasting session into a JSON fixture for the browser UI tests.

Runs the real HTTP service in-process, drives one session to completion with the
scripted taster, and captures every wire payload the browser client would see:
the question before each answer, the answer posted, the answer acknowledgement,
and the full region state after every step.  The frontend test suite replays
this transcript through a fetch stub, so the TypeScript side is tested against
genuine service responses without re-implementing the search.

Usage: python3 scripts/record_session_fixture.py [output.json]
Default output: frontend/tests/fixtures/session.json
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from ordersearch.core import Point2
from ordersearch.oracles import builtin_function, scripted_respondent
from ordersearch.service import create_app

# Same taster the acceptance gate uses: prefers drinks nearer the sweet spot,
# calls a tie when the two sips are within 0.05 preference units.
TIE_THRESHOLD = 0.05
MAX_STEPS = 200


def record(out_path: Path) -> dict:
    objective = builtin_function("preference_bump")
    respond = scripted_respondent(objective, tie_threshold=TIE_THRESHOLD)

    with tempfile.TemporaryDirectory() as state_dir:
        client = TestClient(create_app(state_dir))
        config_request: dict = {}
        session_id = client.post("/sessions", json=config_request).json()["id"]

        def state() -> dict:
            resp = client.get(f"/sessions/{session_id}/state")
            resp.raise_for_status()
            return resp.json()

        questions: list[dict] = []
        answers: list[dict] = []
        summaries: list[dict] = []
        states: list[dict] = [state()]
        completion: dict | None = None

        for _ in range(MAX_STEPS):
            question = client.get(f"/sessions/{session_id}/question").json()
            if question.get("status") == "complete":
                completion = question
                break
            a = Point2(*question["option_a"]["point"])
            b = Point2(*question["option_b"]["point"])
            answer = {"token": question["token"], "preference": respond(a, b)}
            resp = client.post(f"/sessions/{session_id}/answer", json=answer)
            resp.raise_for_status()
            questions.append(question)
            answers.append(answer)
            summaries.append(resp.json())
            states.append(state())
        else:
            raise RuntimeError("session did not finish; fixture not written")

    fixture = {
        "config_request": config_request,
        "session_id": session_id,
        "questions": questions,
        "answers": answers,
        "summaries": summaries,
        "states": states,
        "completion": completion,
    }
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(json.dumps(fixture, indent=2) + "\n")
    return fixture


def main() -> None:
    default = Path(__file__).resolve().parent.parent / "frontend/tests/fixtures/session.json"
    out_path = Path(sys.argv[1]) if len(sys.argv) > 1 else default
    fixture = record(out_path)
    final = fixture["completion"]["final"]
    print(f"wrote {out_path}")
    print(
        f"  {len(fixture['answers'])} answers, {len(fixture['states'])} states, "
        f"final point {final['point']}"
    )


if __name__ == "__main__":
    main()
