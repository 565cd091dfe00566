#!/usr/bin/env python3
"""Recompute reference feature vectors from the shipped data files.

Standalone reimplementation used to freeze golden_features.csv; it shares no
code with the C++ extractor. Run from the repository root:

    python3 tests/fixtures/golden_features.py > tests/fixtures/golden_features.csv
"""
import math
import sys
from pathlib import Path

DATA = Path(__file__).resolve().parents[2] / "data"

SLDS = [
    "whatisthis", "face1book", "a0e5b612", "aaaa", "google", "my-site99",
    "xkcd", "ab", "deadbeef", "qwrtzpxkvb", "information", "cat",
]

NAMES = [
    "L-HEX", "L-LEN", "L-DIG", "L-DOT", "L-CON-MAX", "L-VOW-MAX", "L-W2", "L-W3",
    "R-CON-VOW", "R-Dom-3G", "R-Dom-4G", "R-Dom-5G", "R-VOW-3G", "R-VOW-4G", "R-VOW-5G",
    "R-WS-LEN", "R-WD-LEN", "R-WDS-LEN", "R-W2-LEN", "R-W2-LEN-D", "R-W3-LEN", "R-W3-LEN-D",
]
VARIANTS = ["Dom", "Dom-WS", "Dom-D", "Dom-WDS", "Dom-W2", "Dom-W3"]
NAMES += ["GIB-1-" + v for v in VARIANTS] + ["GIB-2-" + v for v in VARIANTS] + ["E-" + v for v in VARIANTS]

VOWELS = set("aeiou")
LETTERS = set("abcdefghijklmnopqrstuvwxyz")
SECOND_LEVEL = {"ac", "co", "com", "edu", "gov", "net", "org"}


def lines(name):
    out = []
    for raw in (DATA / name).read_text(encoding="utf-8").splitlines():
        t = raw.strip()
        if t and not t.startswith("#"):
            out.append(t)
    return out


def sld_of(domain):
    d = domain.strip().lower()
    if d.endswith("."):
        d = d[:-1]
    labels = d.split(".")
    if len(labels) == 1:
        return labels[0], labels
    if len(labels) >= 3 and len(labels[-1]) == 2 and labels[-2] in SECOND_LEVEL:
        return labels[-3], labels
    return labels[-2], labels


def benign_slds():
    seen, out = set(), []
    for line in lines("benign_model.txt"):
        if "/" in line or ":" in line or any(ord(c) > 127 for c in line):
            continue
        sld, labels = sld_of(line)
        if not sld or any(l.startswith("xn--") for l in labels) or sld in seen:
            continue
        seen.add(sld)
        out.append(sld)
    return out


def windows(s, n):
    return [s[i:i + n] for i in range(len(s) - n + 1)]


class Words:
    def __init__(self, ranked):
        uniq = []
        seen = set()
        for w in ranked:
            if w not in seen:
                seen.add(w)
                uniq.append(w)
        n = len(uniq)
        self.cost = {w: math.log((i + 1) * math.log(n)) for i, w in enumerate(uniq)}
        self.oov = math.log(n * math.log(n)) + 1.0
        self.maxlen = max(len(w) for w in uniq)

    def split(self, s):
        best = [0.0] + [math.inf] * len(s)
        back = [0] * (len(s) + 1)
        for i in range(1, len(s) + 1):
            for k in range(1, min(self.maxlen, i) + 1):
                piece = s[i - k:i]
                c = self.cost.get(piece, self.oov if k == 1 else None)
                if c is None or best[i - k] == math.inf:
                    continue
                if best[i - k] + c < best[i]:
                    best[i] = best[i - k] + c
                    back[i] = k
        out, i = [], len(s)
        while i > 0:
            out.append(s[i - back[i]:i])
            i -= back[i]
        return out[::-1]

    def split_runs(self, s):
        out, run = [], ""
        for c in s + "#":
            if c in LETTERS:
                run += c
            else:
                if run:
                    out += self.split(run)
                run = ""
        return out


def symbols(s):
    return [c for c in s.lower() if c in LETTERS or c == " "]


def idx(c):
    return 26 if c == " " else ord(c) - ord("a")


class Markov:
    def __init__(self, text, good, bad):
        counts = [[1.0] * 27 for _ in range(27)]
        seq = symbols(text)
        for a, b in zip(seq, seq[1:]):
            counts[idx(a)][idx(b)] += 1
        self.lp = [[math.log(c / sum(row)) for c in row] for row in counts]
        self.threshold = 0.0
        good_scores = [v for v in (self.avg(l) for l in good) if v is not None]
        bad_scores = [v for v in (self.avg(l) for l in bad) if v is not None]
        assert min(good_scores) > max(bad_scores)
        self.threshold = (min(good_scores) + max(bad_scores)) / 2

    def avg(self, s):
        seq = symbols(s)
        if len(seq) < 2:
            return None
        return sum(self.lp[idx(a)][idx(b)] for a, b in zip(seq, seq[1:])) / (len(seq) - 1)

    def score(self, s):
        v = self.avg(s)
        return math.exp(self.threshold if v is None else v)


def band(r, lo, hi):
    if r < lo:
        p = (lo - r) / lo
    elif r > hi:
        p = (r - hi) / (1 - hi)
    else:
        p = 0.0
    return min(1.0, max(0.0, p))


def heuristic(s, words):
    letters = "".join(c for c in s.lower() if c in LETTERS)
    if not letters:
        return 1.0
    covered = sum(len(w) for w in words.split_runs(s.lower()) if len(w) >= 2)
    n = len(letters)
    u = band(len(set(letters)) / n, 0.3, 0.8)
    v = band(sum(c in VOWELS for c in letters) / n, 0.25, 0.55)
    c = min(1.0, max(0.0, 1 - covered / n))
    return (u + v + c) / 3


def entropy(s):
    if not s:
        return 0.0
    h = 0.0
    for c in set(s):
        p = s.count(c) / len(s)
        h -= p * math.log2(p)
    return max(h, 0.0)


def longest_run(s, pred):
    best = run = 0
    for c in s:
        run = run + 1 if pred(c) else 0
        best = max(best, run)
    return best


def features(dom, grams, words, markov):
    dom_d = "".join(c for c in dom if not c.isdigit())
    ws = words.split_runs(dom)
    wds = words.split_runs(dom_d)
    dom_ws, dom_wds = " ".join(ws), " ".join(wds)
    dom_w2 = "".join(w for w in ws if len(w) > 2)
    dom_w3 = "".join(w for w in ws if len(w) > 3)
    L = len(dom)
    vow = sum(c in VOWELS for c in dom)
    con = sum(c in LETTERS and c not in VOWELS for c in dom)

    def ratio(a, b):
        return a / b if b else 0.0

    def letters(s):
        return sum(c in LETTERS for c in s)

    f = [
        1.0 if all(c in "0123456789abcdef" for c in dom) else 0.0,
        L,
        sum(c.isdigit() for c in dom),
        0.0,
        longest_run(dom, lambda c: c in LETTERS and c not in VOWELS),
        longest_run(dom, lambda c: c in VOWELS),
        sum(len(w) > 2 for w in ws),
        sum(len(w) > 3 for w in ws),
        min(con / max(1, vow), L) / L,
    ]
    for n in (3, 4, 5):
        w = windows(dom, n)
        f.append(ratio(sum(g in grams[n] for g in w), len(w)))
    for n in (3, 4, 5):
        w = windows(dom, n)
        f.append(ratio(sum(any(c in VOWELS for c in g) for g in w), len(w)))
    f += [
        ratio(letters(dom_ws), L),
        ratio(letters(dom_wds.replace(" ", "")), L),
        ratio(letters(dom_wds), L),
        ratio(len(dom_w2), L),
        ratio(len(dom_w2), len(dom_d)),
        ratio(len(dom_w3), L),
        ratio(len(dom_w3), len(dom_d)),
    ]
    targets = [dom, dom_ws, dom_d, dom_wds, dom_w2, dom_w3]
    f += [markov.score(t) for t in targets]
    f += [heuristic(t, words) for t in targets]
    f += [entropy(t) for t in targets]
    return f


def main():
    corpus = benign_slds()
    grams = {n: {g for s in corpus for g in windows(s, n)} for n in (3, 4, 5)}
    words = Words([w.lower() for w in lines("wordlist.txt")])
    markov = Markov((DATA / "gibberish_text.txt").read_text(encoding="utf-8"),
                    lines("gibberish_good.txt"), lines("gibberish_bad.txt"))
    out = sys.stdout
    out.write(",".join(NAMES) + ",sld\n")
    for dom in SLDS:
        vals = features(dom, grams, words, markov)
        out.write(",".join(repr(float(v)) for v in vals) + "," + dom + "\n")


if __name__ == "__main__":
    main()
