#!/usr/bin/env python3
"""Regenerate the files under data/ from their upstream sources.

Upstream inputs (not vendored, pass their paths on the command line):
  --wordninja-words   wordninja_words.txt from the wordninja package (MIT)
  --top-domains       newline-delimited list of popular registered domains

Everything here is deterministic: the same inputs produce byte-identical
outputs.
"""

import argparse
import random
import re
import string
from pathlib import Path

ALPHA = re.compile(r"^[a-z]+$")
SECOND_LEVEL = {"co", "com", "org", "net", "ac", "gov", "edu"}


def sld_of(domain):
    labels = domain.strip().lower().rstrip(".").split(".")
    if len(labels) == 1:
        return labels[0]
    if len(labels) >= 3 and len(labels[-1]) == 2 and labels[-2] in SECOND_LEVEL:
        return labels[-3]
    return labels[-2]


def write_lines(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def make_wordlist(src, out):
    seen = set()
    words = []
    for line in src.read_text(encoding="utf-8").splitlines():
        w = line.strip()
        if ALPHA.match(w) and w not in seen:
            seen.add(w)
            words.append(w)
    write_lines(out / "wordlist.txt", words)
    return words


def zipf_pairs(wordlist, limit):
    # weight ~ 1/rank, the same ordering the word segmenter's costs assume
    return [(w, 1.0 / (i + 1)) for i, w in enumerate(wordlist[:limit])]


def make_gibberish_text(pairs, out, rng):
    words = [w for w, _ in pairs]
    weights = [c for _, c in pairs]
    lines = []
    size = 0
    while size < 400_000:
        n = rng.randint(6, 16)
        line = " ".join(rng.choices(words, weights=weights, k=n))
        lines.append(line)
        size += len(line) + 1
    write_lines(out / "gibberish_text.txt", lines)

    good = []
    top = pairs[:5000]
    for _ in range(300):
        n = rng.randint(4, 10)
        good.append(" ".join(rng.choices([w for w, _ in top],
                                         weights=[c for _, c in top], k=n)))
    write_lines(out / "gibberish_good.txt", good)

    bad = []
    for _ in range(300):
        n = rng.randint(12, 40)
        chars = [rng.choice(string.ascii_lowercase) for _ in range(n)]
        for i in range(1, n - 1):
            if rng.random() < 0.08:
                chars[i] = " "
        bad.append("".join(chars).strip())
    write_lines(out / "gibberish_bad.txt", bad)


def make_dict500(wordlist, out):
    picked = []
    for w in wordlist[150:]:
        if 4 <= len(w) <= 8:
            picked.append(w)
        if len(picked) == 500:
            break
    write_lines(out / "dict500.txt", picked)


def make_benign_split(src, out, rng, eval_groups):
    groups = {}
    order = []
    for line in src.read_text(encoding="utf-8").splitlines():
        d = line.strip().lower()
        if not d or "xn--" in d:
            continue
        s = sld_of(d)
        if s not in groups:
            groups[s] = []
            order.append(s)
        groups[s].append(d)
    shuffled = order[:]
    rng.shuffle(shuffled)
    eval_set = set(shuffled[:eval_groups])
    eval_lines, model_lines = [], []
    for s in order:
        (eval_lines if s in eval_set else model_lines).extend(groups[s])
    write_lines(out / "benign_eval.txt", eval_lines)
    write_lines(out / "benign_model.txt", model_lines)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--wordninja-words", type=Path, required=True)
    ap.add_argument("--top-domains", type=Path, required=True)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--seed", type=int, default=20200731)
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    wordlist = make_wordlist(args.wordninja_words, args.out)
    make_gibberish_text(zipf_pairs(wordlist, 30000), args.out, random.Random(args.seed))
    make_dict500(wordlist, args.out)
    make_benign_split(args.top_domains, args.out, random.Random(args.seed + 1), 12000)
    write_lines(args.out / "second_level_suffixes.txt",
                ["# second-level labels stripped when followed by a 2-letter ccTLD"]
                + sorted(SECOND_LEVEL))


if __name__ == "__main__":
    main()
