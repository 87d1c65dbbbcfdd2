#!/usr/bin/env python3
"""Regenerates the bundled deterministic fixtures and the mini embedding
table under crates/core/resources/. Run from the repository root."""

import hashlib
import json
import os
import random

ROOT = os.path.join(os.path.dirname(__file__), "..", "crates", "core", "resources")

FACT = ["Low", "Mixed", "High"]
BIAS = [
    "Extreme-Left",
    "Left",
    "Center-Left",
    "Center",
    "Center-Right",
    "Right",
    "Extreme-Right",
]

FILLER = [
    "news", "daily", "report", "media", "outlet", "press", "journal", "online",
    "coverage", "stories", "readers", "national", "local", "world", "politics",
    "business", "culture", "sports", "today", "weekly", "morning", "evening",
    "update", "bulletin", "network", "channel", "tribune", "times", "post",
    "herald", "city", "editor", "staff", "desk", "wire", "print", "digital",
    "radio", "county", "region",
]


def hashed_vector(token, dim=25, scale=0.5):
    out = []
    for k in range(dim):
        digest = hashlib.sha256(f"{token}|{k}".encode()).digest()
        u = int.from_bytes(digest[:8], "little") / 2**64
        out.append(round((2.0 * u - 1.0) * scale, 6))
    return out


def write_embeddings():
    dim = 25
    vocab = {}

    # Planted class tokens get strong, well-separated vectors.
    for f in range(3):
        v = [0.0] * dim
        v[f] = 6.0
        vocab[f"plantfact{f}"] = v
    for b in range(7):
        v = [0.0] * dim
        v[3 + b] = 6.0
        vocab[f"plantbias{b}"] = v

    words = set(FILLER)
    lex_dir = os.path.join(ROOT, "lexicons")
    for name in sorted(os.listdir(lex_dir)):
        with open(os.path.join(lex_dir, name)) as fh:
            for line in fh:
                term = line.split("#")[0].strip().lower().rstrip("*")
                if term and "'" not in term and " " not in term and len(term) > 1:
                    words.add(term)
    for w in sorted(words):
        vocab.setdefault(w, hashed_vector(w, dim))

    # Pad with synthetic tokens to roughly five thousand entries.
    i = 0
    while len(vocab) < 5000:
        token = f"token{i:04d}"
        vocab.setdefault(token, hashed_vector(token, dim))
        i += 1

    path = os.path.join(ROOT, "embeddings", "mini25.txt")
    with open(path, "w") as fh:
        fh.write(f"{len(vocab)} {dim}\n")
        for token in sorted(vocab):
            values = " ".join(f"{x:g}" for x in vocab[token])
            fh.write(f"{token} {values}\n")
    print(f"wrote {path}: {len(vocab)} tokens, dim {dim}")


def write_label_distribution():
    rng = random.Random(20180801)
    fact_labels = [0] * 256 + [1] * 268 + [2] * 542
    bias_labels = (
        [0] * 21 + [1] * 168 + [2] * 209 + [3] * 263 + [4] * 92 + [5] * 157 + [6] * 156
    )
    rng.shuffle(fact_labels)
    rng.shuffle(bias_labels)
    path = os.path.join(ROOT, "fixtures", "label_distribution.csv")
    with open(path, "w") as fh:
        fh.write("medium_id,url,factuality,bias7\n")
        for i, (f, b) in enumerate(zip(fact_labels, bias_labels)):
            mid = f"medium{i:04d}.example"
            fh.write(f"{mid},http://{mid},{FACT[f]},{BIAS[b]}\n")
    print(f"wrote {path}: 1066 rows")


def write_planted_corpus():
    rng = random.Random(20240811)
    base = os.path.join(ROOT, "fixtures", "planted")
    bundles = os.path.join(base, "bundles")
    os.makedirs(bundles, exist_ok=True)

    def sentence(n):
        words = rng.sample(FILLER, n)
        return " ".join(words).capitalize() + "."

    rows = []
    for i in range(60):
        f = i % 3
        b = i % 7
        mid = f"planted{i:02d}.example"
        url = f"http://{mid}/"
        rows.append((mid, url, FACT[f], BIAS[b]))

        articles = []
        for _ in range(2):
            articles.append(
                {
                    "title": sentence(5),
                    "body": " ".join(sentence(rng.randint(8, 12)) for _ in range(3)),
                }
            )
        plant = f"plantfact{f} plantbias{b}"
        wiki = {
            "content": f"{plant} " + " ".join(rng.sample(FILLER, 8)),
            "summary": f"{plant} " + " ".join(rng.sample(FILLER, 4)),
            "infobox": "type: " + rng.choice(["newspaper", "website", "broadcaster"]),
            "categories": ["news websites", rng.choice(["american media", "online media"])],
            "toc": ["history", rng.choice(["coverage", "reception", "audience"])],
        }
        twitter = {
            "verified": rng.random() < 0.5,
            "created_year": rng.randint(2007, 2020),
            "description": " ".join(rng.sample(FILLER, 6)),
            "counts": {
                "followers": rng.randint(100, 1_000_000),
                "friends": rng.randint(10, 5_000),
                "statuses": rng.randint(50, 200_000),
                "favorites": rng.randint(0, 20_000),
                "listed": rng.randint(0, 2_000),
            },
        }
        if rng.random() < 0.6:
            twitter["location"] = rng.choice(["New York", "London", "Chicago", "Austin"])
        if rng.random() < 0.8:
            twitter["profile_url"] = url
        bundle = {
            "medium_id": mid,
            "articles": articles,
            "wiki": wiki,
            "twitter": twitter,
            "alexa_rank": rng.randint(500, 500_000),
        }
        bundle_dir = os.path.join(bundles, mid)
        os.makedirs(bundle_dir, exist_ok=True)
        with open(os.path.join(bundle_dir, "bundle.json"), "w") as fh:
            json.dump(bundle, fh, indent=1)
            fh.write("\n")

    with open(os.path.join(base, "corpus.csv"), "w") as fh:
        fh.write("medium_id,url,factuality,bias7\n")
        for mid, url, fact, bias in rows:
            fh.write(f"{mid},{url},{fact},{bias}\n")
    print(f"wrote {base}: 60 media")


if __name__ == "__main__":
    write_embeddings()
    write_label_distribution()
    write_planted_corpus()
