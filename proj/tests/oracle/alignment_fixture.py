#!/usr/bin/env python3
# Copyright 2026 The Wikistance Authors.
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
"""Writes the registry-size alignment fixture.

94 en, 48 de and 33 tr canonical policies. Interwiki links form 20 en-de-tr
triples, 18 en-de pairs and one de-tr pair, so 59 titles are absorbed into
another language's entry and the superset has 175 - 59 = 116 entries. The
expected size is recomputed here with a plain union-find.

    python3 tests/oracle/alignment_fixture.py > tests/fixtures/alignment/snapshot.json
"""

import json

SIZES = {"en": 94, "de": 48, "tr": 33}
NS = {"en": "Wikipedia", "de": "Wikipedia", "tr": "Vikipedi"}
NAMED = {
    "en": ["Notability", "Verifiability", "What Wikipedia is not"],
    "de": ["Relevanzkriterien", "Belege", "Was Wikipedia nicht ist"],
    "tr": ["Kayda değerlik", "Doğrulanabilirlik", "Vikipedi ne değildir"],
}


def titles(lang):
    named = [f"{NS[lang]}:{t}" for t in NAMED[lang]]
    rest = [f"{NS[lang]}:Policy {lang.upper()} {i:03d}"
            for i in range(SIZES[lang] - len(named))]
    return named + rest


def main():
    t = {lang: titles(lang) for lang in SIZES}
    links = {lang: {} for lang in SIZES}

    def link(a_lang, a, b_lang, b):
        links[a_lang].setdefault(a, {})[b_lang] = b

    for i in range(20):  # triples; tr links back to de for even i only
        link("en", t["en"][i], "de", t["de"][i])
        link("en", t["en"][i], "tr", t["tr"][i])
        link("de", t["de"][i], "en", t["en"][i])
        if i % 2 == 0:
            link("tr", t["tr"][i], "de", t["de"][i])
    for i in range(20, 38):  # en-de pairs, recorded on one side only
        if i % 2:
            link("en", t["en"][i], "de", t["de"][i])
        else:
            link("de", t["de"][i], "en", t["en"][i])
    link("de", t["de"][38], "tr", t["tr"][20])  # bypasses English
    # Links to pages outside the registries are ignored.
    link("en", t["en"][60], "de", "Wikipedia:Nicht im Register")
    link("tr", t["tr"][30], "en", "Wikipedia:Not in the registry")

    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    nodes = {(lang, title) for lang in SIZES for title in t[lang]}
    for node in nodes:
        find(node)
    for lang, by_title in links.items():
        for title, targets in by_title.items():
            for tlang, ttitle in targets.items():
                if (tlang, ttitle) in nodes:
                    parent[find((lang, title))] = find((tlang, ttitle))
    superset = len({find(n) for n in nodes})

    registries = []
    for lang in SIZES:
        registries.append({
            "language": lang,
            "min_count": 1,
            "canonical": sorted(t[lang]),
            "counts": {title: 1 for title in sorted(t[lang])},
            "redirect_map": {},
            "merge_map": {},
        })
    print(json.dumps({"registries": registries, "links": links,
                      "expected_superset_size": superset},
                     ensure_ascii=False, indent=1, sort_keys=True))


if __name__ == "__main__":
    main()
