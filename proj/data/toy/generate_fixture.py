#!/usr/bin/env python3
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
#
# Regenerates the bundled toy two-domain fixture:
#   indomain.txt  - weather-report style sentences (the "authentic" domain)
#   parallel.tsv  - gloss <TAB> text pairs derived from indomain.txt
#   general.txt   - everyday-topic sentences; a minority mention weather so
#                   data selection has something in-domain-ish to find
#
# Deterministic: fixed seed, no dependency beyond the stdlib.

import random
from pathlib import Path

SEED = 20240817
N_INDOMAIN = 500
N_GENERAL = 500
MIXED_FRACTION = 0.3

DAYS = ["montag", "dienstag", "mittwoch", "donnerstag", "freitag", "samstag",
        "sonntag", "heute", "morgen", "uebermorgen"]
REGIONS = ["im norden", "im sueden", "im westen", "im osten", "im nordwesten",
           "im suedosten", "an der kueste", "in den bergen", "im bergland",
           "in der mitte", "am rhein", "in den alpen"]
DIRS = ["nordwest", "suedost", "nordost", "suedwest", "nord", "sued", "west", "ost"]
PHEN = ["regen", "schnee", "nebel", "gewitter", "schauer", "wolken", "sturm",
        "frost", "glaette", "hagel", "sonnenschein", "spruehregen"]
ADJ = ["stark", "schwach", "maessig", "kraeftig", "dicht", "freundlich",
       "wechselhaft", "mild", "frisch", "stuermisch", "trocken", "kalt",
       "warm", "heiter"]
NUMS = ["zwei", "fuenf", "acht", "zehn", "zwoelf", "fuenfzehn", "achtzehn",
        "zwanzig", "fuenfundzwanzig", "dreissig"]

# Words that drop out of the gloss (function words and fillers).
GLOSS_DROP = {"am", "im", "in", "an", "der", "die", "das", "den", "dem", "es",
              "gibt", "und", "auch", "mit", "auf", "aus", "bis", "von", "nach",
              "zu", "sich", "bei", "ein", "eine", "einen", "heran", "um"}

# Content words with a non-identity gloss form.
GLOSS_MAP = {
    "norden": "NORD", "sueden": "SUED", "westen": "WEST", "osten": "OST",
    "nordwesten": "NORDWEST", "suedosten": "SUEDOST", "kueste": "KUESTE",
    "bergen": "BERG", "bergland": "BERGLAND", "mitte": "MITTE",
    "rhein": "RHEIN", "alpen": "ALPEN", "wolken": "WOLKE",
    "temperaturen": "TEMPERATUR", "weht": "WEHEN", "scheint": "SCHEINEN",
    "steigen": "STEIGEN", "sinken": "SINKEN", "bleibt": "BLEIBEN",
    "kommt": "KOMMEN", "faellt": "FALLEN", "ziehen": "ZIEHEN",
    "regnet": "REGEN", "schneit": "SCHNEE", "bringt": "BRINGEN",
    "haelt": "HALTEN", "klart": "KLAR", "stuermisch": "STURM",
    "sonnenschein": "SONNE", "boeen": "BOEE", "sonne": "SONNE",
    "spruehregen": "SPRUEHREGEN",
}


def gloss_of(text_tokens):
    gloss = []
    for tok in text_tokens:
        if tok in GLOSS_DROP:
            continue
        gloss.append(GLOSS_MAP.get(tok, tok.upper()))
    return gloss


def indomain_sentence(rng):
    day = rng.choice(DAYS)
    day2 = rng.choice(DAYS)
    region = rng.choice(REGIONS)
    region2 = rng.choice(REGIONS)
    direction = rng.choice(DIRS)
    phen = rng.choice(PHEN)
    phen2 = rng.choice([p for p in PHEN if p != phen])
    adj = rng.choice(ADJ)
    adj2 = rng.choice([a for a in ADJ if a != adj])
    num = rng.choice(NUMS)
    templates = [
        f"am {day} gibt es {region} {adj} {phen}",
        f"heute gibt es {region} {phen} und {phen2}",
        f"der wind weht {adj} aus {direction}",
        f"die temperaturen steigen auf {num} grad",
        f"die temperaturen sinken auf {num} grad",
        f"in der nacht faellt {phen} {region}",
        f"am {day} scheint die sonne {region}",
        f"morgen bleibt es {adj} und {adj2}",
        f"am {day} ziehen {phen} von {direction} heran",
        f"{region} bleibt es am {day} {adj}",
        f"am {day} kommt {region} {adj} {phen}",
        f"der himmel bleibt {adj} mit {phen}",
        f"es regnet am {day} {region}",
        f"am {day} schneit es {region}",
        f"die nacht bringt {phen} und {phen2}",
        f"das wetter bleibt {adj} bis {day2}",
        f"{region} weht {adj} wind mit boeen",
        f"am {day} steigen die temperaturen auf {num} grad",
        f"nebel haelt sich {region} bis mittag",
        f"am abend klart es {region} auf",
    ]
    return rng.choice(templates)


SUBJECTS = ["der mann", "die frau", "die kinder", "der lehrer", "die schueler",
            "meine mutter", "der baecker", "die nachbarin", "der student",
            "die familie"]
CITIES = ["berlin", "hamburg", "muenchen", "koeln", "dresden", "frankfurt"]
GOODS = ["brot", "kaese", "obst", "gemuese", "blumen", "karten"]
MEALS = ["suppe", "nudeln", "reis", "kuchen", "salat"]
PEOPLE = ["oma", "opa", "freund", "tante", "onkel"]


def general_sentence(rng):
    subj = rng.choice(SUBJECTS)
    city = rng.choice(CITIES)
    goods = rng.choice(GOODS)
    meal = rng.choice(MEALS)
    person = rng.choice(PEOPLE)
    templates = [
        "die kinder spielen im park",
        f"der zug faehrt nach {city}",
        f"{subj} kauft {goods} auf dem markt",
        f"{subj} liest ein buch in der bibliothek",
        f"{subj} kocht {meal} am abend",
        "die schueler lernen mathematik in der schule",
        f"{subj} singt ein lied im chor",
        f"{subj} schreibt einen brief an {person}",
        f"{subj} besucht das museum in der stadt",
        f"{subj} arbeitet im buero bis zum abend",
        "die katze schlaeft auf dem sofa",
        f"{subj} tanzt auf dem fest",
        "der film beginnt um acht uhr im kino",
        f"{subj} trinkt kaffee im cafe",
        "die mannschaft gewinnt das spiel im stadion",
        f"{subj} wohnt in einer kleinen wohnung",
        f"{subj} faehrt mit dem fahrrad zur arbeit",
        "die blumen bluehen im garten",
        f"{subj} spielt gitarre am abend",
        f"der bus nach {city} kommt zu spaet",
    ]
    return rng.choice(templates)


def mixed_tail(rng):
    phen = rng.choice(PHEN)
    phen2 = rng.choice([p for p in PHEN if p != phen])
    adj = rng.choice(ADJ)
    day = rng.choice(DAYS)
    tails = [
        f"bei {adj} {phen} und {phen2}",
        f"trotz {phen} und {adj} wind",
        f"bei {phen} {phen2} und boeen aus {rng.choice(DIRS)}",
        f"obwohl es am {day} {phen} und {phen2} gibt",
    ]
    return rng.choice(tails)


def main():
    rng = random.Random(SEED)
    out_dir = Path(__file__).resolve().parent

    indomain = [indomain_sentence(rng) for _ in range(N_INDOMAIN)]
    with open(out_dir / "indomain.txt", "w", encoding="utf-8") as f:
        for line in indomain:
            f.write(line + "\n")

    with open(out_dir / "parallel.tsv", "w", encoding="utf-8") as f:
        for line in indomain:
            gloss = gloss_of(line.split())
            f.write(" ".join(gloss) + "\t" + line + "\n")

    general = []
    n_mixed = int(N_GENERAL * MIXED_FRACTION)
    for i in range(N_GENERAL):
        base = general_sentence(rng)
        if i < n_mixed:
            base = base + " " + mixed_tail(rng)
        general.append(base)
    rng.shuffle(general)
    with open(out_dir / "general.txt", "w", encoding="utf-8") as f:
        for line in general:
            f.write(line + "\n")

    print(f"wrote {len(indomain)} in-domain and {len(general)} general sentences")


if __name__ == "__main__":
    main()
