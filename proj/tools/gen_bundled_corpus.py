#!/usr/bin/env python3
# Copyright 2026 The aggrtest Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the BASE rows, supplied semantic variants, duplicate index and
scripted model table of suites/classify_issue_report.

The syntactic variants are not written here; run

    aggrtest variants corpus.jsonl --seed 7 --semantic semantic.jsonl

afterwards so that S1-S3 come from the harness's own operators.
"""

import argparse
import itertools
import json
import pathlib

BUG_ACTIONS = [
    "tap the save button", "rotate the device", "switch to dark mode", "upload a large photo",
    "log out quickly", "paste a long url", "open a push notification", "scroll to the bottom",
    "change the language", "delete the last item",
]
BUG_SCREENS = ["settings", "profile", "checkout", "gallery", "inbox"]

FEATURES = [
    "a dark theme", "keyboard shortcuts", "bulk export", "a weekly summary email", "custom tags",
    "two-factor login", "an undo button", "offline maps", "calendar integration", "shared folders",
]
FEATURE_AREAS = [
    ("the web client", "teams can work faster"),
    ("the mobile app", "people on the go get the same tools"),
    ("the admin console", "operators save time"),
    ("the public api", "integrators can automate it"),
    ("the desktop app", "power users stay in one place"),
]

INVALID_OPENERS = [
    "Does anyone know a good recipe for", "Where can I buy cheap", "Who won the match about",
    "Check out my new blog post about", "Can someone do my homework on", "What is the best song about",
    "I am selling used", "Is it going to rain during", "Looking for a roommate who likes", "Free giveaway of",
]
INVALID_TOPICS = ["banana bread", "garden furniture", "vintage bicycles", "mountain hiking", "board games"]

DUP_SUBJECTS = [
    "calendar sync stops after the first event", "password reset email never arrives",
    "export to csv drops the last column", "search results ignore accented letters",
    "offline mode loses unsaved drafts", "two-factor codes are rejected as expired",
    "video thumbnails show the wrong frame", "notifications arrive twice on tablets",
    "attachments over 10 mb fail silently", "timezone changes shift all reminders by one hour",
]
DUP_CONTEXTS = [
    "since the 4.2 update", "on android 14 devices", "for accounts created before march",
    "when the battery saver is on", "after switching workspaces",
]

SEMANTIC_PER_CLASS = 10

# Scripted answers that deviate from the clean class label.
DEFECTS = {
    "BUG-007": "Answer: BUG",
    "FEATURE-013": "It is a FEATURE.",
    "INVALID-021": "INVALID or FEATURE",
    "BUG-031:S2": "INVALID",
    "BUG-002:SEM2": "FEATURE",
    "FEATURE-004:SEM1": "BUG",
}


def bases():
    rows = []
    for k, (action, screen) in enumerate(itertools.product(BUG_ACTIONS, BUG_SCREENS), 1):
        rows.append(("BUG", k, f"The app crashes when I {action} on the {screen} screen. It happens every time.",
                     (action, screen)))
    for k, (feature, (area, benefit)) in enumerate(itertools.product(FEATURES, FEATURE_AREAS), 1):
        rows.append(("FEATURE", k, f"Please add {feature} to {area} so that {benefit}.", (feature, area)))
    for k, (opener, topic) in enumerate(itertools.product(INVALID_OPENERS, INVALID_TOPICS), 1):
        rows.append(("INVALID", k, f"{opener} {topic}? Not about this app, just asking here.", (opener, topic)))
    for k, (subject, context) in enumerate(itertools.product(DUP_SUBJECTS, DUP_CONTEXTS), 1):
        rows.append(("DUPLICATE", k, f"{subject} {context}, other users see it too", (subject, context)))
    return rows


def semantic(label, parts):
    a, b = parts
    if label == "BUG":
        return (f"It would be nice if the app stayed open when I {a} on the {b} screen.",
                f"Could the {b} screen handle it better when I {a}? Right now it closes.", "BUG<->FEATURE")
    if label == "FEATURE":
        return (f"{b.capitalize()} is missing {a}, which feels like a defect to me.",
                f"Without {a} in {b} my workflow breaks every day.", "FEATURE<->BUG")
    if label == "INVALID":
        return (f"Could this app help me find {b}? {a} is what I need.",
                f"Please add a section about {b} to the app.", "INVALID<->FEATURE")
    return (f"I noticed that {a} {b}. Is this new or already known?",
            f"Since a few days {a}. It started {b} I think.", "DUPLICATE<->BUG")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("suite_dir", type=pathlib.Path)
    args = parser.parse_args()
    out = args.suite_dir

    corpus, sem_rows, index, by_item = [], [], [], {}
    for label, k, text, parts in bases():
        base_id = f"{label}-{k:03d}"
        corpus.append({"item_id": base_id, "base_id": base_id, "class": label, "variant_type": "BASE",
                       "text": text, "provenance": "authored"})
        if label == "DUPLICATE":
            index.append({"issue_id": f"#{100 + k}", "text": text})
        if k <= SEMANTIC_PER_CLASS:
            sem1, sem2, note = semantic(label, parts)
            sem_rows.append({"base_id": base_id, "sem1": sem1, "sem2": sem2, "target_note": note})
        # DUPLICATE rows reach the model only when the finder misses them,
        # which for the bundled index happens on the paraphrased rows.
        answer = "BUG" if label == "DUPLICATE" else label
        for suffix in ["", ":S1", ":S2", ":S3", ":SEM1", ":SEM2"]:
            item_id = base_id + suffix
            by_item[item_id] = DEFECTS.get(item_id, answer)

    with open(out / "corpus.jsonl", "w", encoding="utf-8") as f:
        for row in corpus:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")
    with open(out / "semantic.jsonl", "w", encoding="utf-8") as f:
        for row in sem_rows:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")
    with open(out / "index.jsonl", "w", encoding="utf-8") as f:
        for row in index:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")
    (out / "scripted").mkdir(exist_ok=True)
    with open(out / "scripted" / "mistral_7b_v0_1.json", "w", encoding="utf-8") as f:
        json.dump({"by_item": by_item, "fallback": "UNKNOWN"}, f, indent=1, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
