#!/usr/bin/env python3
"""Regenerates the committed fixtures under data/fixtures/.

Deterministic: a fixed seed drives every choice, so reruns are
byte-identical. The fixtures themselves are committed; this script only
exists to document how they were made and to allow controlled changes.
"""

import json
import pathlib
import random

OUT_DIR = pathlib.Path(__file__).resolve().parent.parent / "data" / "fixtures"

NOUNS_JA = [
    "人工知能", "量子計算", "気候変動", "電気自動車", "機械翻訳",
    "太陽光発電", "遺伝子編集", "自動運転", "宇宙開発", "再生医療",
]
ASPECTS_JA = ["利点", "課題", "特徴", "用途", "影響"]
COUNTS_JA = ["二", "三", "四", "五"]

NOUNS_EN = [
    "artificial intelligence", "quantum computing", "climate change",
    "electric vehicles", "machine translation", "solar power",
    "gene editing", "autonomous driving", "space exploration",
    "regenerative medicine",
]
ASPECTS_EN = ["advantages", "challenges", "properties", "applications", "effects"]
COUNTS_EN = ["two", "three", "four", "five"]

SUBJECTS = [
    "the system", "this approach", "the method", "recent research",
    "the technology", "each component", "the underlying model",
    "careful analysis", "the process", "modern hardware",
]
VERBS = [
    "reduces", "improves", "transforms", "accelerates", "simplifies",
    "extends", "supports", "enables", "clarifies", "strengthens",
]
VERBS_BASE = [
    "reduce", "improve", "transform", "accelerate", "simplify",
    "extend", "support", "enable", "clarify", "strengthen",
]
OBJECTS = [
    "overall energy consumption", "long term reliability",
    "access to new markets", "the quality of daily decisions",
    "cooperation between research teams", "the speed of development",
    "safety in complex environments", "the accuracy of predictions",
    "communication across different languages", "the cost of deployment",
]
TAILS = [
    "in many practical settings", "over the coming decade",
    "without additional infrastructure", "across most industries",
    "when applied with care", "under realistic conditions",
    "for a wide range of users", "despite early limitations",
    "according to recent studies", "beyond initial expectations",
]

SENTENCES_JA = [
    "この技術は私たちの生活を大きく変えます。",
    "今後の発展が強く期待されています。",
    "専門家の間でも評価が分かれています。",
    "実用化にはまだ時間がかかります。",
    "社会への影響は非常に大きいです。",
    "研究は世界中で急速に進んでいます。",
    "費用の削減にもつながります。",
    "安全性の確保が重要な課題です。",
]


def en_sentence(rng, min_words, max_words):
    """One English sentence with a word count inside [min_words, max_words]."""
    words = []
    words.extend(rng.choice(SUBJECTS).split())
    words.append(rng.choice(VERBS))
    words.extend(rng.choice(OBJECTS).split())
    words.extend(rng.choice(TAILS).split())
    while len(words) < min_words:
        words.extend(rng.choice(TAILS).split())
    while len(words) > max_words:
        words.pop()
    text = " ".join(words)
    return text[0].upper() + text[1:] + "."


def make_corpus(rng):
    records = []
    for i in range(100):
        noun_ix = rng.randrange(len(NOUNS_JA))
        aspect_ix = rng.randrange(len(ASPECTS_JA))
        count_ix = rng.randrange(len(COUNTS_JA))
        tgt_instr = (
            f"{NOUNS_JA[noun_ix]}の主な{ASPECTS_JA[aspect_ix]}を"
            f"{COUNTS_JA[count_ix]}つ説明してください。"
        )
        core_instr_words = (
            f"Please explain {COUNTS_EN[count_ix]} major {ASPECTS_EN[aspect_ix]} "
            f"of {NOUNS_EN[noun_ix]} in simple terms".split()
        )
        assert 8 <= len(core_instr_words) <= 16
        core_instr = " ".join(core_instr_words) + "."
        core_resp = " ".join(
            en_sentence(rng, 10, 20) for _ in range(rng.randint(4, 7))
        )
        tgt_resp = "".join(rng.sample(SENTENCES_JA, rng.randint(2, 4)))
        records.append(
            {
                "id": f"sample-{i:03d}",
                "core_lang": "en",
                "target_lang": "ja",
                "audio_ref": f"audio/sample-{i:03d}.wav",
                "segments": {
                    "target_instruction": tgt_instr,
                    "core_instruction": core_instr,
                    "core_response": core_resp,
                    "target_response": tgt_resp,
                },
                "meta": {"topic": NOUNS_EN[noun_ix]},
            }
        )
    return records


def make_pairs(rng):
    records = []
    seen = set()
    for i in range(100):
        words = []
        words.append("Please")
        words.append("describe")
        words.extend(rng.choice(OBJECTS).split())
        words.append("and")
        words.append(rng.choice(VERBS_BASE))
        words.extend(rng.choice(OBJECTS).split())
        words.extend(rng.choice(TAILS).split())
        while len(words) < 20:
            words.extend(rng.choice(TAILS).split())
        del words[20:]
        words[19] = f"topic{i:03d}"
        instruction = " ".join(words)
        assert len(instruction.split()) == 20
        assert instruction not in seen
        seen.add(instruction)
        response = " ".join(en_sentence(rng, 8, 14) for _ in range(rng.randint(1, 3)))
        records.append(
            {"id": f"pair-{i:03d}", "instruction": instruction, "response": response}
        )
    return records


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False, separators=(",", ":")))
            f.write("\n")


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20260817)
    write_jsonl(OUT_DIR / "corpus_en_ja_100.jsonl", make_corpus(rng))
    write_jsonl(OUT_DIR / "pairs_en_100.jsonl", make_pairs(rng))
    print(f"fixtures written to {OUT_DIR}")


if __name__ == "__main__":
    main()
