#!/usr/bin/env python3
"""Golden files for the mini corpus, computed without the Rust code.

Writes tests/fixtures/mini/golden_dataset.tsv (the build's dataset table) and
tests/fixtures/mini/golden_ttr_len.tsv (per-family Pearson r and p of type-token
ratio and segment length against concreteness, at 50 digits).  Run from the
crate root:

    python3 tests/oracle/gen_mini_golden.py tests/fixtures/mini
"""
import csv
import itertools
import os
import sys
import unicodedata
from collections import defaultdict

import mpmath as mp

mp.mp.dps = 50
POS_ORDER = "anrsv"


def rows(path, delimiter):
    with open(path, encoding="utf-8") as f:
        for line in f.read().split("\n"):
            line = line.rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            if delimiter == "\t":
                yield [c.strip() for c in line.split("\t")]
            else:
                yield next(csv.reader([line]))


def nfc(s):
    return unicodedata.normalize("NFC", s.strip())


def synset_key(s):
    word, pos, sense = s.split("#")
    return (word.encode(), POS_ORDER.index(pos), int(sense))


def concept(s):
    return s.split("#")[0].lower().replace("_", " ")


def first_sense(s):
    return s.split("#")[2] == "1"


def load(root):
    entries = []
    seen = set()
    for lang, lemma, synset in rows(os.path.join(root, "lexicon.tsv"), "\t"):
        e = (lang, nfc(lemma), synset)
        if e not in seen:
            seen.add(e)
            entries.append(e)
    prons = {}
    pron_dir = os.path.join(root, "pron")
    for name in sorted(os.listdir(pron_dir)):
        lang = name[: -len(".tsv")]
        for word, pron in rows(os.path.join(pron_dir, name), "\t"):
            prons.setdefault((lang, nfc(word)), [s for s in pron.split(" ") if s])
    ratings = defaultdict(lambda: [None] * 4)
    for i, r in enumerate(rows(os.path.join(root, "concreteness.csv"), ",")):
        if i == 0 and r[0] == "word":
            continue
        ratings[r[0].strip().lower()][0] = float(r[1])
    for i, r in enumerate(rows(os.path.join(root, "affect.csv"), ",")):
        if i == 0 and r[0] == "word":
            continue
        for k in range(3):
            if r[1 + k]:
                ratings[r[0].strip().lower()][1 + k] = float(r[1 + k])
    families = {}
    for i, r in enumerate(rows(os.path.join(root, "languages.csv"), ",")):
        if i == 0 and r[0] == "code":
            continue
        families[r[0]] = r[1]
    return entries, prons, ratings, families


def dataset(entries, prons, ratings):
    by_lemma = defaultdict(set)
    for lang, lemma, synset in entries:
        by_lemma[(lang, lemma)].add(synset)
    out = []
    for (lang, lemma), synsets in by_lemma.items():
        for a, b in itertools.combinations(sorted(synsets, key=synset_key), 2):
            if not (first_sense(a) and first_sense(b)):
                continue
            c1, c2 = concept(a), concept(b)
            dists = []
            for k in range(4):
                x = ratings.get(c1, [None] * 4)[k]
                y = ratings.get(c2, [None] * 4)[k]
                dists.append(None if x is None or y is None else abs(x - y))
            out.append((c1, c2, lang, lemma, a, b, dists))
    out.sort(key=lambda r: (r[0].encode(), r[1].encode(), r[2].encode(), r[3].encode()))
    lines = ["sense_lemma\tlanguage\tphonemes\tsynset_1\tsynset_2\tconcept_1\tconcept_2\tconc_dist\tv_dist\ta_dist\td_dist"]
    for c1, c2, lang, lemma, a, b, dists in out:
        phon = " ".join(prons[(lang, lemma)]) if (lang, lemma) in prons else "-"
        cells = ["-" if d is None else f"{d:.4f}" for d in dists]
        lines.append("\t".join([lemma, lang, phon, a, b, c1, c2] + cells))
    return out, "\n".join(lines) + "\n"


def pearson(xs, ys):
    n = len(xs)
    xs = [mp.mpf(x) for x in xs]
    ys = [mp.mpf(y) for y in ys]
    mx, my = mp.fsum(xs) / n, mp.fsum(ys) / n
    sxy = mp.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = mp.fsum((x - mx) ** 2 for x in xs)
    syy = mp.fsum((y - my) ** 2 for y in ys)
    r = sxy / mp.sqrt(sxx * syy)
    p = mp.betainc((n - 2) / mp.mpf(2), mp.mpf(1) / 2, 0, 1 - r * r, regularized=True)
    return r, p


def ttr_len(rows_, prons, ratings, families):
    samples = {}
    for c1, c2, lang, lemma, a, b, _ in rows_:
        if (lang, lemma) not in prons:
            continue
        for s in (a, b):
            conc = ratings.get(concept(s), [None] * 4)[0]
            if conc is not None:
                samples[(lang, lemma, s)] = conc
    grouped = defaultdict(list)
    for (lang, lemma, s), conc in samples.items():
        if lang in families:
            grouped[families[lang]].append((prons[(lang, lemma)], conc, lang))
    lines = ["family\tvariable_x\tn\tlanguages\tr\tp"]
    for family in sorted(grouped):
        items = grouped[family]
        ys = [c for _, c, _ in items]
        langs = len({l for _, _, l in items})
        for name, xs in (
            ("ttr", [len(set(p)) / len(p) for p, _, _ in items]),
            ("seg_len", [float(len(p)) for p, _, _ in items]),
        ):
            r, p = pearson(xs, ys)
            lines.append(f"{family}\t{name}\t{len(items)}\t{langs}\t{mp.nstr(r, 20)}\t{mp.nstr(p, 20)}")
    return "\n".join(lines) + "\n"


def main(root):
    entries, prons, ratings, families = load(root)
    rows_, text = dataset(entries, prons, ratings)
    with open(os.path.join(root, "golden_dataset.tsv"), "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    with open(os.path.join(root, "golden_ttr_len.tsv"), "w", encoding="utf-8", newline="\n") as f:
        f.write(ttr_len(rows_, prons, ratings, families))


if __name__ == "__main__":
    main(sys.argv[1])
