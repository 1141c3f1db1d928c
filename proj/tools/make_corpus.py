#!/usr/bin/env python3
"""Generate the bundled caption-style corpus (data/corpus.txt).

Sentences are sampled from a small phrase grammar with a fixed seed so the
file is reproducible. Every sentence has between 5 and 50 words.
"""

import argparse
import random

DETS = ["a", "the", "one", "this"]
PLURAL_DETS = ["two", "three", "some", "several"]
ADJS = ["small", "large", "young", "old", "white", "black", "brown", "red",
        "happy", "tall", "little", "busy"]
NOUNS = {
    "man": "men", "woman": "women", "dog": "dogs", "cat": "cats",
    "boy": "boys", "girl": "girls", "child": "children", "person": "people",
    "horse": "horses", "bird": "birds", "player": "players", "cow": "cows",
}
ACTIONS = [
    ("riding", ["a bike", "a horse", "a skateboard", "a wave", "a bus"]),
    ("holding", ["an umbrella", "a kite", "a phone", "a frisbee", "a bat"]),
    ("eating", ["a pizza", "a sandwich", "some food", "a banana", "a cake"]),
    ("watching", ["the game", "the sky", "the train", "the water", "a show"]),
    ("carrying", ["a bag", "a surfboard", "a ball", "a box", "some wood"]),
    ("walking", ["down the street", "along the road", "across the field"]),
    ("sitting", ["on a bench", "on the grass", "at a table", "on a couch"]),
    ("standing", ["near a fence", "by the door", "next to a car", "in line"]),
]
PLACES = ["on the beach", "in the park", "in a kitchen", "on a street",
          "near the river", "in the snow", "at the station", "in a field",
          "on a hill", "in the city"]
TIMES = ["at night", "in the morning", "during the day", "on a sunny day"]


def noun_phrase(rng):
    noun = rng.choice(sorted(NOUNS))
    if rng.random() < 0.3:
        words = [rng.choice(PLURAL_DETS)]
        if rng.random() < 0.5:
            words.append(rng.choice(ADJS))
        words.append(NOUNS[noun])
        return words, True
    words = [rng.choice(DETS)]
    if rng.random() < 0.5:
        words.append(rng.choice(ADJS))
    words.append(noun)
    return words, False


def sentence(rng):
    subject, plural = noun_phrase(rng)
    verb, objects = rng.choice(ACTIONS)
    words = subject + ["are" if plural else "is", verb]
    words += rng.choice(objects).split()
    if rng.random() < 0.6:
        words += rng.choice(PLACES).split()
    if rng.random() < 0.25:
        words += rng.choice(TIMES).split()
    if rng.random() < 0.15:
        other, _ = noun_phrase(rng)
        words += ["with"] + other
    return " ".join(words) + " ."


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--count", type=int, default=1200)
    parser.add_argument("--seed", type=int, default=2026)
    parser.add_argument("--out", default="data/corpus.txt")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    seen = set()
    lines = []
    while len(lines) < args.count:
        s = sentence(rng)
        n = len(s.split())
        if s in seen or not 5 <= n <= 50:
            continue
        seen.add(s)
        lines.append(s)
    with open(args.out, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
