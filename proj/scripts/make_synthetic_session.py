#!/usr/bin/env python3
"""Regenerate the bundled synthetic session under data/session/.

Deterministic (fixed seed). The session is invented test data shaped like a
two-team brainwriting exercise: 40 ideas tagged by origin, complete expert
and novice rating matrices, and a scripted reply file for the mock provider.
"""

import json
import random
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "data" / "session"

PROBLEM = (
    "How might we reduce everyday sedentary screen time for remote workers "
    "without hurting their productivity?"
)

# (team, source, text) — ids assigned sequentially per team.
IDEAS = [
    # team-1 human (12)
    ("team-1", "human", "Put a cheap walking pad under the desk and log slow kilometres during calls."),
    ("team-1", "human", "A kitchen timer that locks the laptop lid for five minutes every hour so you must stand up."),
    ("team-1", "human", "Walking meetings by default for any call with two people or fewer."),
    ("team-1", "human", "Keep the kettle and the printer on another floor so small errands force stairs."),
    ("team-1", "human", "A stretch poster next to the monitor with three moves to run while files upload."),
    ("team-1", "human", "Swap the office chair for a stool before lunch so slouching gets uncomfortable."),
    ("team-1", "human", "A neighbourhood walk club that meets when the first afternoon meeting ends."),
    ("team-1", "human", "Park the phone charger in the hallway; every notification check becomes a short walk."),
    ("team-1", "human", "End the workday with a fake commute: a twenty minute loop around the block."),
    ("team-1", "human", "A standing desk built from two crates for zero money, raised only in the morning."),
    ("team-1", "human", "Do code reviews on paper printouts while pacing the balcony."),
    ("team-1", "human", "Borrow a dog from a neighbour at midday; the dog never skips the walk."),
    # team-1 llm (5)
    ("team-1", "llm", "A gamified mobile application that awards streak points for hourly movement breaks and syncs with the team leaderboard."),
    ("team-1", "llm", "An AI-powered scheduling assistant that automatically inserts buffer slots for stretching between consecutive meetings."),
    ("team-1", "llm", "A smartwatch integration that delivers adaptive vibration nudges calibrated to the user's sitting streaks."),
    ("team-1", "llm", "A browser extension that dims the screen gradually after fifty sedentary minutes and restores brightness after movement is detected."),
    ("team-1", "llm", "An analytics dashboard that visualizes sedentary time per project and recommends personalized micro-break routines."),
    # team-1 collaborative (3)
    ("team-1", "collaborative", "A walking pad under the desk whose speed is gamified: the application banks points only while the belt moves."),
    ("team-1", "collaborative", "Walking meetings scheduled by the assistant, with the route and step estimate attached to the invite."),
    ("team-1", "collaborative", "A hallway charger paired with smartwatch nudges, so the reminder and the walk happen together."),
    # team-2 human (10)
    ("team-2", "human", "Rearrange the flat so the desk faces the window and the comfy sofa leaves the room."),
    ("team-2", "human", "A rule that every second cup of coffee must be drunk standing in the kitchen."),
    ("team-2", "human", "Print the daily agenda and pin it by the door, reviewing it on foot each morning."),
    ("team-2", "human", "Resistance bands looped on the desk legs for squeezes while reading long documents."),
    ("team-2", "human", "Call a friend instead of messaging; pace the corridor for the whole conversation."),
    ("team-2", "human", "A house slipper with a pebble insole that makes long sitting posture fidgety on purpose."),
    ("team-2", "human", "Move the bin and the shredder to the stairwell landing."),
    ("team-2", "human", "A lunch rule: eat only after a lap around the building, rain or shine."),
    ("team-2", "human", "Stack the week's deliveries by the entrance and carry one box upstairs per break."),
    ("team-2", "human", "A cheap balance board under the standing desk for wobble while answering email."),
    # team-2 llm (6)
    ("team-2", "llm", "A virtual wellness coach application that generates personalized movement plans from calendar density and past adherence."),
    ("team-2", "llm", "An integration that converts unread notifications into walking tasks, releasing them only after a step threshold."),
    ("team-2", "llm", "A gamified team challenge platform where departments earn badges for collective active minutes."),
    ("team-2", "llm", "An ergonomic sensor mat that streams posture analytics to a dashboard and triggers adaptive break reminders."),
    ("team-2", "llm", "A desktop agent that schedules micro-workouts and automatically silences notifications during movement breaks."),
    ("team-2", "llm", "An AI stand-up companion that reads the morning agenda aloud while the user walks, turning review time into active time."),
    # team-2 collaborative (4)
    ("team-2", "collaborative", "The pebble slipper idea refined with a sensor insole that feeds a points dashboard the whole team can see."),
    ("team-2", "collaborative", "Corridor phone calls booked by the scheduling assistant, which picks the longest free corridor slot."),
    ("team-2", "collaborative", "A balance board whose wobble minutes unlock the gamified leaderboard badges."),
    ("team-2", "collaborative", "Stair errands tracked by the smartwatch, with one shared badge per floor climbed as a team."),
]

CHOSEN = {"team-1": 2, "team-2": 36}  # indices into IDEAS (walking meetings; sensor slipper)

EXPERTS = ["E1", "E2", "E3"]
NOVICES = ["N1", "N2", "N3", "N4", "N5", "N6"]
CRITERIA = ["relevance", "innovation", "insightfulness"]

JUSTIFICATION_OPENERS = [
    "Fits the problem squarely",
    "A grounded take on the brief",
    "Tackles the stated need",
    "Reasonable match to the brief",
    "Sound direction for the problem",
]
JUSTIFICATION_TAILS = [
    "though the execution details stay thin.",
    "with a clear path to daily use.",
    "but it leans on habits that are hard to keep.",
    "and the mechanism is easy to picture.",
    "while the originality is only moderate.",
    "and it respects working time well.",
]


def clamp(value, low=1, high=5):
    return max(low, min(high, value))


def main():
    random.seed(42)
    OUT_DIR.mkdir(parents=True, exist_ok=True)

    ideas = []
    counters = {}
    for index, (team, source, text) in enumerate(IDEAS):
        counters[team] = counters.get(team, 0) + 1
        idea = {
            "id": f"{team.replace('team-', 't')}-{counters[team]:02d}",
            "team": team,
            "source": source,
            "text": text,
        }
        if CHOSEN.get(team) == index:
            idea["chosen"] = True
        ideas.append(idea)

    ideas_doc = {"problem_statement": PROBLEM, "ideas": ideas}
    (OUT_DIR / "ideas.json").write_bytes(
        (json.dumps(ideas_doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    )

    # Latent quality per idea drives both human ratings and the mock script.
    quality = {idea["id"]: random.uniform(2.6, 4.7) for idea in ideas}
    rater_bias = {}
    for rater in EXPERTS:
        rater_bias[rater] = -0.25 + random.uniform(-0.2, 0.2)
    for rater in NOVICES:
        rater_bias[rater] = 0.15 + random.uniform(-0.2, 0.2)
    crit_offset = {"relevance": 0.3, "innovation": -0.2, "insightfulness": -0.1}

    lines = ["idea_id,rater_id,group,criterion,value,round"]
    for idea in ideas:
        for rater in EXPERTS + NOVICES:
            group = "expert" if rater in EXPERTS else "novice"
            for criterion in CRITERIA:
                raw = (
                    quality[idea["id"]]
                    + rater_bias[rater]
                    + crit_offset[criterion]
                    + random.gauss(0, 0.55)
                )
                value = clamp(round(raw))
                lines.append(f"{idea['id']},{rater},{group},{criterion},{value},")
    (OUT_DIR / "ratings.csv").write_bytes(("\n".join(lines) + "\n").encode("utf-8"))

    scores = {}
    for idea in ideas:
        base = quality[idea["id"]]
        scores[idea["id"]] = {
            "relevance": clamp(round(base + 0.4 + random.gauss(0, 0.3))),
            "innovation": clamp(round(base - 0.3 + random.gauss(0, 0.3))),
            "insightfulness": clamp(round(base - 0.1 + random.gauss(0, 0.3))),
            "justification": f"{random.choice(JUSTIFICATION_OPENERS)}, "
                             f"{random.choice(JUSTIFICATION_TAILS)}",
        }
    mock = {
        "default": {
            "relevance": 3,
            "innovation": 3,
            "insightfulness": 3,
            "justification": "Middling fit, judged without idea-specific notes.",
        },
        "scores": scores,
        "fail_rounds": [17],
        "jitter": 1,
        "preamble": "Thanks for the idea. Here is my verdict:\n",
    }
    (OUT_DIR / "mock_replies.json").write_bytes(
        (json.dumps(mock, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    )

    print(f"wrote {len(ideas)} ideas, {len(lines) - 1} ratings, "
          f"{len(scores)} scripted replies to {OUT_DIR}")


if __name__ == "__main__":
    main()
