#!/usr/bin/env python3
"""Regenerate the bundled lexicon TSV files under crates/core/data/.

Sources (all permissively licensed, fetched from PyPI):
  * textblob wheel      -> textblob/en/en-lexicon.txt (Brill tagger lexicon, MIT)
  * vaderSentiment wheel -> vaderSentiment/vader_lexicon.txt (MIT)
  * wn==0.0.23 sdist    -> wn/data/wordnet-3.3/ (WordNet license)
  * scikit-learn        -> ENGLISH_STOP_WORDS (BSD)

Usage:
  pip download --no-deps textblob vaderSentiment "wn==0.0.23" -d /tmp/lex
  python3 scripts/build_lexicons.py /tmp/lex crates/core/data
"""
import glob
import os
import re
import sys
import tarfile
import zipfile

PENN_TO_COARSE = {
    "NN": "NOUN", "NNS": "NOUN", "NNP": "NOUN", "NNPS": "NOUN",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB", "VBP": "VERB", "VBZ": "VERB", "MD": "VERB",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "RB": "ADV", "RBR": "ADV", "RBS": "ADV", "WRB": "ADV",
    "PRP": "PRON", "PRP$": "PRON", "WP": "PRON", "WP$": "PRON", "EX": "PRON",
    "DT": "DET", "PDT": "DET", "WDT": "DET",
    "IN": "PREP", "TO": "PREP", "RP": "PREP",
    "CC": "CONJ",
    "CD": "NUM",
}

# Content words that scikit-learn lists as stopwords but that carry topic
# meaning in running text.
KEEP_CONTENT = {
    "bill", "fire", "system", "computer", "interest", "detail", "mill", "find",
    "show", "front", "back", "top", "bottom", "side", "call", "cry", "describe",
    "thick", "thin", "full", "empty", "found", "move", "part", "put", "give",
    "take", "see", "made", "amount", "name", "fill", "serious", "con", "de",
    "co", "inc", "ltd", "eg", "ie", "un", "re",
}

WORD_RE = re.compile(r"^[a-z][a-z'\-]*$")


def build_pos(src_dir, out_dir):
    wheel = glob.glob(os.path.join(src_dir, "textblob-*.whl"))[0]
    text = zipfile.ZipFile(wheel).read("textblob/en/en-lexicon.txt").decode("utf-8")
    lower, folded = {}, {}
    for line in text.splitlines():
        if line.startswith(";;;") or not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            continue
        word, tag = parts
        coarse = PENN_TO_COARSE.get(tag)
        if coarse is None:
            continue
        key = word.lower()
        if not WORD_RE.match(key):
            continue
        if word == key:
            lower.setdefault(key, coarse)
        else:
            folded.setdefault(key, coarse)
    for key, coarse in folded.items():
        lower.setdefault(key, coarse)
    with open(os.path.join(out_dir, "pos_lexicon.tsv"), "w", encoding="utf-8") as f:
        for key in sorted(lower):
            f.write(f"{key}\t{lower[key]}\n")
    return len(lower)


def build_sentiment(src_dir, out_dir):
    wheel = glob.glob(os.path.join(src_dir, "vaderSentiment-*.whl"))[0]
    text = zipfile.ZipFile(wheel).read("vaderSentiment/vader_lexicon.txt").decode("utf-8")
    out = {}
    for line in text.splitlines():
        parts = line.split("\t")
        if len(parts) < 2:
            continue
        word = parts[0].strip().lower()
        if not WORD_RE.match(word):
            continue
        weight = max(-1.0, min(1.0, float(parts[1]) / 4.0))
        if weight != 0.0:
            out[word] = round(weight, 4)
    with open(os.path.join(out_dir, "sentiment_lexicon.tsv"), "w", encoding="utf-8") as f:
        for word in sorted(out):
            f.write(f"{word}\t{out[word]}\n")
    return len(out)


def load_wordnet(src_dir):
    sdist = glob.glob(os.path.join(src_dir, "wn-0.0.23.tar.gz"))[0]
    files = {}
    with tarfile.open(sdist) as tar:
        for pos in ("adj", "adv", "noun", "verb"):
            for kind in ("data", "index"):
                name = f"wn-0.0.23/wn/data/wordnet-3.3/{kind}.{pos}"
                files[(kind, pos)] = tar.extractfile(name).read().decode("utf-8", "replace")
    synsets = {}
    for pos in ("adj", "adv", "noun", "verb"):
        for line in files[("data", pos)].splitlines():
            if line.startswith("  ") or not line.strip():
                continue
            fields = line.split(" | ")[0].split()
            offset = fields[0]
            w_cnt = int(fields[3], 16)
            words = []
            for i in range(w_cnt):
                w = fields[4 + 2 * i]
                w = re.sub(r"\(.*\)$", "", w).lower()
                words.append(w)
            p_idx = 4 + 2 * w_cnt
            p_cnt = int(fields[p_idx])
            ptrs = []
            for j in range(p_cnt):
                sym, toff, tpos, st = fields[p_idx + 1 + 4 * j: p_idx + 5 + 4 * j]
                ptrs.append((sym, toff, tpos, int(st[:2], 16), int(st[2:], 16)))
            synsets[(pos, offset)] = (words, ptrs)
    index = {}
    for pos in ("adj", "adv", "noun", "verb"):
        for line in files[("index", pos)].splitlines():
            if line.startswith("  ") or not line.strip():
                continue
            fields = line.split()
            lemma = fields[0]
            synset_cnt = int(fields[2])
            p_cnt = int(fields[3])
            tagsense = int(fields[5 + p_cnt])
            offsets = fields[6 + p_cnt: 6 + p_cnt + synset_cnt]
            index[(pos, lemma)] = (tagsense, offsets)
    return synsets, index


POS_SS = {"n": "noun", "v": "verb", "a": "adj", "s": "adj", "r": "adv"}


def build_antonyms_synonyms(src_dir, out_dir):
    synsets, index = load_wordnet(src_dir)
    # Synonym substitution is limited to words the POS lexicon also knows.
    with open(os.path.join(out_dir, "pos_lexicon.tsv"), encoding="utf-8") as f:
        common = {line.split("\t")[0] for line in f}
    antonyms = {}
    synonyms = {}
    for pos in ("adj", "adv", "verb", "noun"):
        for (p, lemma), (tagsense, offsets) in sorted(index.items()):
            if p != pos or not WORD_RE.match(lemma):
                continue
            if lemma not in antonyms:
                for off in offsets:
                    words, ptrs = synsets[(pos, off)]
                    if lemma not in words:
                        continue
                    src = words.index(lemma) + 1
                    found = None
                    for sym, toff, tpos, s, t in ptrs:
                        if sym == "!" and s == src:
                            twords, _ = synsets[(POS_SS[tpos], toff)]
                            cand = twords[t - 1]
                            if WORD_RE.match(cand) and cand != lemma:
                                found = cand
                                break
                    if found:
                        antonyms[lemma] = found
                        break
            if pos in ("adj", "adv") and lemma not in synonyms and lemma in common:
                words, _ = synsets[(pos, offsets[0])]
                for cand in words:
                    if cand != lemma and cand in common:
                        synonyms[lemma] = cand
                        break
    with open(os.path.join(out_dir, "antonyms.tsv"), "w", encoding="utf-8") as f:
        for w in sorted(antonyms):
            f.write(f"{w}\t{antonyms[w]}\n")
    with open(os.path.join(out_dir, "synonyms.tsv"), "w", encoding="utf-8") as f:
        for w in sorted(synonyms):
            f.write(f"{w}\t{synonyms[w]}\n")
    return len(antonyms), len(synonyms)


def build_stopwords(out_dir):
    from sklearn.feature_extraction.text import ENGLISH_STOP_WORDS

    words = sorted((set(ENGLISH_STOP_WORDS) - KEEP_CONTENT) | {"n't", "'s", "'re", "'ll", "'ve", "'m", "'d"})
    with open(os.path.join(out_dir, "stopwords.tsv"), "w", encoding="utf-8") as f:
        for w in words:
            f.write(f"{w}\t1\n")
    return len(words)


def main():
    src_dir, out_dir = sys.argv[1], sys.argv[2]
    os.makedirs(out_dir, exist_ok=True)
    print("pos", build_pos(src_dir, out_dir))
    print("sentiment", build_sentiment(src_dir, out_dir))
    print("antonyms/synonyms", build_antonyms_synonyms(src_dir, out_dir))
    print("stopwords", build_stopwords(out_dir))


if __name__ == "__main__":
    main()
