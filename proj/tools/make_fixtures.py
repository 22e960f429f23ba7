#!/usr/bin/env python3
# Copyright 2026 The Rolescope Authors.
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
"""Regenerates the bundled test fixtures (corpus + offline OpenAlex cache).

Output is a pure function of SEED. Run from the repository root:

    python3 tools/make_fixtures.py
"""

import csv
import json
import random
import unicodedata
from pathlib import Path

SEED = 20240611
BASE = "https://api.openalex.org"
OA = "https://openalex.org/"
OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

JOURNALS = [("PNAS", "PNAS"), ("Nature", "Nature"), ("Science", "Science"),
            ("PLoS One", "PLOS ONE")]

GIVEN = ["John", "Maria", "Wei", "Aisha", "Lukas", "Sofia", "Kenji", "Elena",
         "Omar", "Priya", "Tomas", "Hannah", "Diego", "Ingrid", "Rahul",
         "Chloe", "Mateo", "Yuki", "Fatima", "Pieter", "Nadia", "Samuel",
         "Leila", "Oskar", "Amara", "Henrik", "Lucia", "David", "Mei",
         "Andre", "Zoë", "José", "Łukasz", "François", "Søren", "Ana",
         "Björn", "Renée", "Jürgen", "Märta", "Carlos", "Irene", "Felix",
         "Grace", "Ivan", "Julia", "Kwame", "Laura", "Marco", "Nora"]
SURNAMES = ["Smith", "Garcia", "Zhang", "Khan", "Becker", "Rossi", "Tanaka",
            "Petrova", "Haddad", "Iyer", "Novak", "Schmidt", "Alvarez",
            "Larsen", "Mehta", "Dubois", "Herrera", "Sato", "Rahman",
            "Jansen", "Karimi", "Okafor", "Nasser", "Lindqvist", "Mensah",
            "Berg", "Moretti", "Cohen", "Lin", "Silva", "Müller", "Núñez",
            "Wójcik", "Lefèvre", "Jørgensen", "Costa", "Åström", "Gagné",
            "Weiß", "Öberg", "Ortega", "Pappas", "Vogel", "Wright", "Volkov",
            "Kowalski", "Asante", "Fischer", "Ricci", "Quinn"]

LEAD = ["designed research", "designed the study", "supervised the project",
        "directed the study", "coordinated the fieldwork",
        "interpreted the results", "conducted the research",
        "wrote the paper", "conceptualized the study", "wrote the manuscript"]
DIRECT = ["collected data", "analyzed data", "prepared samples",
          "assisted with experiments", "helped with the measurements",
          "collected the specimens"]
INDIRECT = ["provided reagents", "contributed new analytic tools",
            "commented on the manuscript", "edited the paper",
            "participated in discussions", "discussed the results"]
NEUTRAL = ["performed experiments", "ran simulations", "built the apparatus"]

ROLES = ["Leadership", "DirectSupport", "IndirectSupport"]


def ascii_fold(s):
    out = []
    for ch in s:
        special = {"Ł": "L", "ł": "l", "ø": "o", "Ø": "O", "ß": "ss"}
        if ch in special:
            out.append(special[ch])
            continue
        out.append("".join(c for c in unicodedata.normalize("NFKD", ch)
                           if ord(c) < 128))
    return "".join(out)


def sentence(phrases):
    if len(phrases) == 1:
        text = phrases[0]
    else:
        text = ", ".join(phrases[:-1]) + " and " + phrases[-1]
    return text[0].upper() + text[1:] + "."


def statement_for(rng, role):
    if role == "Leadership":
        phrases = rng.sample(LEAD, rng.randint(1, 2))
        phrases += rng.sample(DIRECT + INDIRECT, rng.randint(0, 2))
    elif role == "DirectSupport":
        phrases = rng.sample(DIRECT, rng.randint(1, 2))
        phrases += rng.sample(INDIRECT, rng.randint(0, 1))
    else:
        phrases = rng.sample(INDIRECT, rng.randint(1, 2))
    rng.shuffle(phrases)
    return sentence(phrases)


def work_json(work):
    return {
        "id": OA + work["id"],
        "publication_year": work["year"],
        "cited_by_count": work["cited"],
        "referenced_works": [OA + r for r in work["refs"]],
        "concepts": [{"id": OA + c, "display_name": "Concept " + c[1:]}
                     for c in work["concepts"]],
        "authorships": [
            {
                "author_position": ("first" if i == 0 else
                                    "last" if i == len(work["authors"]) - 1
                                    else "middle"),
                "author": {"id": OA + a["id"], "display_name": a["name"]},
                "institutions": [{"id": OA + inst} for inst in a["insts"]],
                "is_corresponding": a["corr"],
            }
            for i, a in enumerate(work["authors"])
        ],
    }


def main():
    rng = random.Random(SEED)
    authors = []
    for i in range(50):
        aid = "A50000000%02d" % (i + 1)
        senior = rng.random()
        authors.append({
            "id": aid,
            "name": GIVEN[i] + " " + SURNAMES[i],
            "senior": senior,
            "start": 2012 - int(senior * 20),
            "refs": ["W10000%04d" % rng.randrange(600) for _ in range(30)],
            "concepts": ["C%d" % (1 + rng.randrange(40)) for _ in range(6)],
            "insts": ["I%d" % (100 + rng.randrange(25))
                      for _ in range(rng.randint(1, 3))],
        })
    by_id = {a["id"]: a for a in authors}

    def authorship(a, corr):
        return {"id": a["id"], "name": a["name"],
                "insts": rng.sample(a["insts"], rng.randint(1, len(a["insts"]))),
                "corr": corr}

    works = []
    history_counter = [0]

    def history_work(a, year, lead):
        history_counter[0] += 1
        n_outside = rng.randint(1, 4)
        team = [{"id": "A9%09d" % rng.randrange(10 ** 9),
                 "name": "Outside Author %d" % rng.randrange(1000),
                 "insts": ["I%d" % (200 + rng.randrange(50))], "corr": False}
                for _ in range(n_outside)]
        pos = 0 if lead else rng.randint(1, n_outside)
        me = authorship(a, lead and rng.random() < 0.8)
        team.insert(pos, me)
        if not any(m["corr"] for m in team):
            team[-1]["corr"] = True
        works.append({
            "id": "W20000%05d" % history_counter[0],
            "year": year,
            "cited": rng.randrange(400),
            "refs": sorted(set(rng.sample(a["refs"], rng.randint(3, 12)) +
                               ["W10000%04d" % rng.randrange(600)
                                for _ in range(rng.randint(0, 5))])),
            "concepts": sorted(set(rng.sample(a["concepts"], rng.randint(1, 4)))),
            "authors": team,
        })

    # Special authors: A5000000001 has exactly 12 works, nine before 2015;
    # A5000000002 has a single work.
    special_one, special_two = authors[0], authors[1]
    for year in [2004, 2006, 2007, 2009, 2010, 2011, 2012, 2013, 2014,
                 2015, 2018]:
        history_work(special_one, year, rng.random() < 0.6)
    for a in authors[2:]:
        count = 2 + int(a["senior"] * 12)
        for _ in range(count):
            year = rng.randint(a["start"], 2020)
            history_work(a, year, rng.random() < 0.15 + 0.7 * a["senior"])

    regular = authors[2:]
    focal = []
    for j, (jname, _) in enumerate(JOURNALS):
        for k in range(15):
            idx = j * 15 + k + 1
            year = rng.randint(2005, 2020)
            size = rng.randint(2, 8)
            team = rng.sample(regular, size)
            if idx == 7:
                team[rng.randrange(size)] = special_one
                year = 2016
            if idx == 23:
                team[rng.randrange(size)] = special_two
            # Senior authors tend to sit first or last.
            team.sort(key=lambda a: -a["senior"] + rng.random() * 0.6)
            team = [team[0]] + team[2:] + [team[1]] if size > 2 else team
            corr_pos = 0 if rng.random() < 0.5 else size - 1
            members = [authorship(a, i == corr_pos) for i, a in enumerate(team)]
            refs = set()
            for a in team:
                refs.update(rng.sample(a["refs"], 3))
            refs.update("W10000%04d" % rng.randrange(600) for _ in range(8))
            refs = sorted(refs)
            if idx == 1:
                refs = refs[:20] if len(refs) >= 20 else refs + [
                    "W11000%04d" % n for n in range(20 - len(refs))]
            concepts = set()
            for a in team:
                concepts.update(rng.sample(a["concepts"], 2))
            concepts.update("C%d" % (1 + rng.randrange(40)) for _ in range(2))
            w = {"id": "W30000000%02d" % idx, "year": year,
                 "cited": rng.randrange(2000), "refs": refs,
                 "concepts": sorted(concepts), "authors": members,
                 "journal": jname}
            focal.append(w)
            works.append(w)
    assert len(focal[0]["refs"]) == 20

    # Corpus rows.
    rows = []
    for w in focal:
        size = len(w["authors"])
        for pos, m in enumerate(w["authors"], start=1):
            a = by_id[m["id"]]
            if pos == 1:
                p_lead = 0.55 + 0.4 * a["senior"]
            elif pos == size:
                p_lead = 0.45 + 0.5 * a["senior"]
            else:
                p_lead = 0.05 + 0.35 * a["senior"]
            u = rng.random()
            role = ("Leadership" if u < p_lead else
                    "DirectSupport" if u < p_lead + (1 - p_lead) * 0.6 else
                    "IndirectSupport")
            statement = statement_for(rng, role)
            gold = role
            if rng.random() < 0.06:
                statement = sentence(rng.sample(NEUTRAL, rng.randint(1, 2)))
                gold = "DirectSupport"
            elif rng.random() < 0.08:
                gold = rng.choice([r for r in ROLES if r != role])
            variant = rng.random()
            given, surname = a["name"].split(" ", 1)
            if variant < 0.6:
                name = a["name"]
            elif variant < 0.75:
                name = given[0] + ". " + surname
            elif variant < 0.87:
                name = surname + ", " + given
            else:
                name = ascii_fold(a["name"]).lower()
            rows.append({
                "paper_id": w["id"], "journal": w["journal"],
                "year": w["year"], "author_name": name,
                "author_position": pos,
                "is_corresponding": "true" if m["corr"] else "false",
                "statement": statement, "gold_role": gold})
    dirty = [
        {"paper_id": "W3999999901", "journal": "PNAS", "year": 1999,
         "author_name": "Old Timer", "author_position": 1,
         "is_corresponding": "true", "statement": "Designed research.",
         "gold_role": "Leadership"},
        {"paper_id": "W3999999902", "journal": "Cell", "year": 2010,
         "author_name": "Wrong Venue", "author_position": 1,
         "is_corresponding": "true", "statement": "Wrote the paper.",
         "gold_role": "Leadership"},
        {"paper_id": "W3999999903", "journal": "Nature", "year": 2011,
         "author_name": "No Statement", "author_position": 1,
         "is_corresponding": "false", "statement": "",
         "gold_role": "DirectSupport"},
    ]
    rows[40:40] = dirty[:1]
    rows[120:120] = dirty[1:2]
    rows.append(dirty[2])

    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "corpus.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=list(rows[0].keys()),
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)

    cache = OUT / "openalex_cache"
    cache.mkdir(parents=True, exist_ok=True)
    stamp = "2024-06-11T00:00:00Z"
    with open(cache / "works.jsonl", "w", encoding="utf-8") as f:
        for w in focal:
            entry = {"request_url": BASE + "/works/" + w["id"],
                     "fetched_at": stamp,
                     "body": json.dumps(work_json(w), ensure_ascii=False,
                                        sort_keys=True)}
            f.write(json.dumps(entry, ensure_ascii=False) + "\n")
    with open(cache / "author_works.jsonl", "w", encoding="utf-8") as f:
        for a in authors:
            mine = [w for w in works
                    if any(m["id"] == a["id"] for m in w["authors"])]
            mine.sort(key=lambda w: w["id"])
            body = {"meta": {"count": len(mine), "next_cursor": None,
                             "per_page": 200},
                    "results": [work_json(w) for w in mine]}
            url = (BASE + "/works?cursor=*&filter=author.id:" + a["id"] +
                   "&per-page=200")
            entry = {"request_url": url, "fetched_at": stamp,
                     "body": json.dumps(body, ensure_ascii=False,
                                        sort_keys=True)}
            f.write(json.dumps(entry, ensure_ascii=False) + "\n")
    with open(cache / "manifest.json", "w", encoding="utf-8") as f:
        json.dump({"schema_version": 1, "base_url": BASE,
                   "first_fetched_at": stamp, "last_fetched_at": stamp,
                   "generator": "tools/make_fixtures.py", "seed": SEED}, f,
                  indent=2)
        f.write("\n")

    n_one = sum(1 for w in works
                if any(m["id"] == special_one["id"] for m in w["authors"]))
    print("authors", len(authors), "focal works", len(focal),
          "history works", len(works) - len(focal), "corpus rows", len(rows),
          "A5000000001 works", n_one)


if __name__ == "__main__":
    main()
