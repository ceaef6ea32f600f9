#!/usr/bin/env python3
"""Regenerates data/fixtures from lexicon.tsv.

The fixtures are synthetic recordings: four translation services with
deterministic coverage gaps and a few disagreeing answers, plus synset
evidence. They drive the concept pipeline offline.

    python3 tools/fixtures/make_fixtures.py [--out data/fixtures]
"""
import argparse
import json
import re
import shutil
import zlib
from pathlib import Path

HERE = Path(__file__).resolve().parent
LANGS = ["es", "de", "zh", "ja", "he", "id"]
SERVICES = ["google", "bing", "baidu", "itranslate"]

# CIFAR-100 class names, spelled the way they are queried.
LABELS = """apple, aquarium fish, baby, bear, beaver, bed, bee, beetle, bicycle, bottle, bowl, boy, bridge, bus,
butterfly, camel, can, castle, caterpillar, cattle, chair, chimp, clock, cloud, cockroach, couch, crab, crocodile,
cup, dinosaur, dolphin, elephant, flatfish, forest, fox, girl, hamster, house, kangaroo, keyboard, lamp,
lawn mower, leopard, lion, lizard, lobster, man, tree, motorcycle, mountain, mouse, mushroom, oak tree, orange,
orchid, otter, palm tree, pear, pickup truck, pine tree, plain, plate, poppy, porcupine, possum, rabbit, raccoon,
stingray, road, rocket, rose, sea, seal, shark, shrew, skunk, skyscraper, snail, snake, spider, squirrel,
streetcar, sunflower, pepper, table, tank, telephone, television, tiger, tractor, train, trout, tulip, turtle,
wardrobe, whale, willow tree, wolf, woman, worm"""

FUNCTION_WORDS = """the and of you it that is was what this with for not have just know to a in be on
are do he she they we me my your all so but get there no about here can't don't yeah okay right well""".split()

# Terms where one service answers with near-synonyms; only agreement-based
# melding picks the surfaces the synset evidence links.
ALTERNATES = {
    "dog": {"es": "can", "de": "Köter", "he": "כלבלב"},
    "car": {"es": "auto", "de": "Wagen", "he": "אוטו"},
    "phone": {"es": "móvil", "de": "Telefon", "he": "פלאפון"},
    "house": {"es": "hogar", "de": "Heim", "he": "בית מגורים"},
    "kid": {"es": "chico", "de": "Kleinkind", "he": "ילדון"},
}


def slug(s):
    return re.sub(r"-+", "-", re.sub(r"[^a-z0-9]", "-", s.lower())).strip("-")


def crc(s):
    return zlib.crc32(s.encode("utf-8"))


def load_lexicon():
    rows = []
    for line in (HERE / "lexicon.tsv").read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        f = line.split("\t")
        rows.append({"term": f[0], "fate": f[1], "surfaces": {l: s for l, s in zip(LANGS, f[2:]) if s}})
    return rows


def service_answer(service, term, truth):
    """Returns the recorded response body for one (service, term)."""
    h = crc(term)
    tricky = term in ALTERNATES
    ans = dict(truth)
    if service == "google":
        if h % 7 == 0 or tricky:
            ans.pop("he", None)
        ans = {**ans, "fr": "[fr] " + term}  # extra language, filtered by the pipeline
    elif service == "bing":
        if h % 5 == 1 or tricky:
            ans.pop("id", None)
        if tricky:
            ans.update(ALTERNATES[term])
    elif service == "baidu":
        ans.pop("he", None)
        if h % 2 == 1:
            ans.pop("id", None)
    elif service == "itranslate":
        if h % 11 == 3 and not tricky:
            return {"$error": "unavailable"} if h % 2 else None
        if h % 3 == 0 and not tricky:
            ans.pop("id", None)
    return ans


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(HERE.parent.parent / "data" / "fixtures"))
    out = Path(ap.parse_args().out)
    for sub in ["translations", "synsets"]:
        shutil.rmtree(out / sub, ignore_errors=True)

    rows = load_lexicon()
    labels = [t.strip() for t in LABELS.replace("\n", " ").split(",")]
    label_set = set(labels)

    # Frequency lists: every non-label term, split across the two streams with
    # descending counts; function words lead both lists.
    freq_terms = [r["term"] for r in rows if r["term"] not in label_set and r["fate"] != "unfilled"]
    tv, fiction = [], []
    for i, t in enumerate(freq_terms):
        (tv if i % 2 == 0 else fiction).append(t)
    def counts(words, start):
        return [f"{w}\t{start - 7 * i}" for i, w in enumerate(words)]
    (out / "tv.txt").write_text("\n".join(counts(FUNCTION_WORDS + tv, 90000)) + "\n", encoding="utf-8")
    (out / "fiction.txt").write_text("\n".join(counts(FUNCTION_WORDS[::-1] + fiction, 70000)) + "\n", encoding="utf-8")
    (out / "labels.txt").write_text("# CIFAR-100 class names\n" + "\n".join(labels) + "\n", encoding="utf-8")
    (out / "denylist.txt").write_text(
        "# verb-noun collisions removed by hand\n"
        + "\n".join(r["term"] for r in rows if r["fate"] == "denylist") + "\n", encoding="utf-8")

    for r in rows:
        term, truth = r["term"], r["surfaces"]
        for svc in SERVICES:
            body = service_answer(svc, term, truth)
            if body is None:
                continue
            p = out / "translations" / svc / f"{slug(term)}.json"
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(json.dumps(body, ensure_ascii=False, sort_keys=True, indent=1) + "\n", encoding="utf-8")

        linked = {l: [s] for l, s in truth.items()}
        linked["en"] = [term]
        if r["fate"] == "synset-miss":
            lang = LANGS[crc(term) % len(LANGS)]
            linked[lang] = ["(unrelated sense)"]
        evidence = {"is_noun": r["fate"] != "non-noun", "linked_surfaces": linked}
        p = out / "synsets" / f"{slug(term)}.json"
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(json.dumps(evidence, ensure_ascii=False, sort_keys=True, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
