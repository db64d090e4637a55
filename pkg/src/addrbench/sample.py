"""Deterministic generator for the bundled open sample corpus.

The rows are synthetic but shaped like segmented reference data: uppercase
values, abbreviated directionals and road types, several distinct streets per
(city, state, zip). Real city names are paired with made-up zips drawn from
each state's zip prefix range.

Regenerate the bundled file with ``python -m addrbench.sample``.
"""
from __future__ import annotations

import csv
import io
import random
from importlib import resources
from pathlib import Path

from .lexicons import default_lexicons

CSV_HEADER = ["id", "house_number", "predirectional", "street_name", "road_type",
              "postdirectional", "city", "state", "zip"]

SAMPLE_SEED = 20231113

# state -> (zip prefix range, cities)
STATE_CITIES = {
    "AL": ((350, 369), ["OZARK", "HAZEL GREEN", "BIRMINGHAM", "MONTGOMERY", "HUNTSVILLE",
                        "MOBILE", "TUSCALOOSA", "DOTHAN", "AUBURN", "FLORENCE"]),
    "AR": ((716, 729), ["LITTLE ROCK", "NORTH LITTLE ROCK", "FAYETTEVILLE", "FORT SMITH",
                        "JONESBORO", "CONWAY", "ROGERS", "PINE BLUFF"]),
    "AZ": ((850, 865), ["PHOENIX", "TUCSON", "MESA", "CHANDLER", "SCOTTSDALE", "FLAGSTAFF",
                        "YUMA", "PRESCOTT"]),
    "CA": ((900, 961), ["LOS ANGELES", "SAN DIEGO", "SAN JOSE", "SAN FRANCISCO", "FRESNO",
                        "SACRAMENTO", "LONG BEACH", "OAKLAND", "BAKERSFIELD", "ANAHEIM",
                        "SANTA ANA", "RIVERSIDE", "REDLANDS", "EL CAJON", "LA MESA",
                        "SANTA BARBARA", "PALM SPRINGS"]),
    "CO": ((800, 816), ["DENVER", "COLORADO SPRINGS", "AURORA", "FORT COLLINS", "BOULDER",
                        "PUEBLO", "GREELEY", "GOLDEN"]),
    "DC": ((200, 205), ["WASHINGTON"]),
    "FL": ((320, 349), ["JACKSONVILLE", "MIAMI", "TAMPA", "ORLANDO", "WEST PALM BEACH",
                        "TALLAHASSEE", "GAINESVILLE", "FORT LAUDERDALE", "SAINT PETERSBURG",
                        "NORTH MIAMI", "PENSACOLA", "SARASOTA"]),
    "GA": ((300, 319), ["ATLANTA", "SAVANNAH", "AUGUSTA", "COLUMBUS", "MACON", "ATHENS",
                        "ROSWELL", "VALDOSTA"]),
    "IL": ((600, 629), ["CHICAGO", "SPRINGFIELD", "PEORIA", "ROCKFORD", "NAPERVILLE",
                        "JOLIET", "EVANSTON", "CHAMPAIGN", "EAST SAINT LOUIS"]),
    "IN": ((460, 479), ["INDIANAPOLIS", "SOUTH BEND", "FORT WAYNE", "EVANSVILLE",
                        "BLOOMINGTON", "LAFAYETTE", "MUNCIE", "GARY"]),
    "KY": ((400, 427), ["LOUISVILLE", "LEXINGTON", "BOWLING GREEN", "OWENSBORO", "FRANKFORT",
                        "PADUCAH"]),
    "LA": ((700, 714), ["NEW ORLEANS", "BATON ROUGE", "SHREVEPORT", "LAFAYETTE",
                        "LAKE CHARLES", "MONROE", "KENNER"]),
    "MA": ((10, 27), ["BOSTON", "WORCESTER", "SPRINGFIELD", "CAMBRIDGE", "LOWELL",
                      "NEW BEDFORD", "QUINCY", "SALEM"]),
    "MI": ((480, 499), ["DETROIT", "GRAND RAPIDS", "LANSING", "ANN ARBOR", "FLINT",
                        "KALAMAZOO", "SAGINAW", "TRAVERSE CITY"]),
    "MN": ((550, 567), ["MINNEAPOLIS", "SAINT PAUL", "ROCHESTER", "DULUTH", "BLOOMINGTON",
                        "SAINT CLOUD"]),
    "MO": ((630, 658), ["KANSAS CITY", "SAINT LOUIS", "SPRINGFIELD", "COLUMBIA",
                        "INDEPENDENCE", "JOPLIN"]),
    "NC": ((270, 289), ["SALVO", "CHARLOTTE", "RALEIGH", "GREENSBORO", "DURHAM",
                        "WINSTON SALEM", "FAYETTEVILLE", "WILMINGTON", "ASHEVILLE"]),
    "NJ": ((70, 89), ["NEWARK", "JERSEY CITY", "PATERSON", "EAST ORANGE", "TRENTON",
                      "CAMDEN", "CHERRY HILL"]),
    "NM": ((870, 884), ["ALBUQUERQUE", "LAS CRUCES", "SANTA FE", "RIO RANCHO", "ROSWELL",
                        "FARMINGTON"]),
    "NV": ((889, 898), ["LAS VEGAS", "NORTH LAS VEGAS", "HENDERSON", "RENO", "SPARKS",
                        "CARSON CITY"]),
    "NY": ((100, 149), ["NEW YORK", "BUFFALO", "ROCHESTER", "YONKERS", "SYRACUSE", "ALBANY",
                        "ITHACA", "WHITE PLAINS"]),
    "OH": ((430, 459), ["COLUMBUS", "CLEVELAND", "CINCINNATI", "TOLEDO", "AKRON", "DAYTON",
                        "YOUNGSTOWN", "NORTH CANTON"]),
    "OK": ((730, 749), ["OKLAHOMA CITY", "TULSA", "NORMAN", "BROKEN ARROW", "LAWTON",
                        "EDMOND"]),
    "PA": ((150, 196), ["PHILADELPHIA", "PITTSBURGH", "ALLENTOWN", "ERIE", "READING",
                        "SCRANTON", "LANCASTER", "STATE COLLEGE"]),
    "SC": ((290, 299), ["COLUMBIA", "CHARLESTON", "NORTH CHARLESTON", "GREENVILLE",
                        "SPARTANBURG", "MYRTLE BEACH"]),
    "TN": ((370, 385), ["NASHVILLE", "MEMPHIS", "KNOXVILLE", "CHATTANOOGA", "CLARKSVILLE",
                        "MURFREESBORO", "JACKSON"]),
    "TX": ((750, 799), ["HOUSTON", "SOUTH HOUSTON", "AUSTIN", "DALLAS", "SAN ANTONIO",
                        "EL PASO", "FORT WORTH", "COLLEGE STATION", "BRYAN", "CORPUS CHRISTI",
                        "LUBBOCK", "AMARILLO", "LAREDO", "GRAND PRAIRIE", "WACO"]),
    "UT": ((840, 847), ["SALT LAKE CITY", "PROVO", "OGDEN", "SAINT GEORGE", "LOGAN",
                        "WEST JORDAN"]),
    "VA": ((220, 246), ["RICHMOND", "VIRGINIA BEACH", "NORFOLK", "ARLINGTON", "ALEXANDRIA",
                        "ROANOKE", "CHARLOTTESVILLE"]),
    "WA": ((980, 994), ["SEATTLE", "SPOKANE", "TACOMA", "VANCOUVER", "BELLEVUE", "OLYMPIA",
                        "YAKIMA"]),
    "WI": ((530, 549), ["MILWAUKEE", "MADISON", "GREEN BAY", "KENOSHA", "RACINE",
                        "EAU CLAIRE", "LA CROSSE"]),
}

FIXED_ZIPS = {
    ("AL", "OZARK"): "36360",
    ("AL", "HAZEL GREEN"): "35750",
    ("NC", "SALVO"): "27972",
    ("TX", "COLLEGE STATION"): "77845",
    ("TX", "HOUSTON"): "77001",
    ("AR", "NORTH LITTLE ROCK"): "72114",
}

NAME_WORDS = """
OAK MAPLE CEDAR PINE ELM WILLOW HICKORY MAGNOLIA BIRCH ASPEN CHERRY POPLAR CYPRESS
DOGWOOD LAUREL SYCAMORE CHESTNUT JUNIPER REDWOOD SPRUCE WALNUT PECAN HOLLY IVY
WASHINGTON LINCOLN JEFFERSON MADISON MONROE JACKSON FRANKLIN ADAMS HAMILTON GRANT
KENNEDY TAYLOR WILSON JOHNSON SMITH BROWN DAVIS MILLER MOORE CLARK LEWIS WALKER
HALL ALLEN YOUNG KING WRIGHT SCOTT GREEN BAKER NELSON CARTER MITCHELL ROBERTS
TURNER PHILLIPS CAMPBELL PARKER EVANS EDWARDS COLLINS STEWART MORRIS ROGERS REED
COOK MORGAN BELL MURPHY BAILEY COOPER RICHARDSON HOWARD WARD PETERSON GRAY
BROOKWOOD BRIARWOOD LAKEWOOD WOODLAND FAIRVIEW RIVERSIDE HILLCREST SUNSET SUNRISE
MEADOWBROOK CLEARWATER STONEBRIDGE FOXHALL REACHCLIFF HAWTHORNE BLUEBONNET
DORY HARBOR BAYSHORE SEABREEZE COASTAL MARINA LIBERTY INDEPENDENCE HERITAGE
CHURCH SCHOOL MILL MARKET BRIDGE STATION DEPOT COLLEGE UNIVERSITY CENTER
HIGHLAND LAKESIDE CANYON MESA PRAIRIE RANCH ORCHARD VINEYARD MEADOW FOREST
SPRING CREEK RIVER VALLEY HILL MOUNTAIN LAKE POND SUMMIT PLATEAU
BROADMOOR KINGSTON ASHFORD BRADFORD CAMBRIDGE OXFORD WINDSOR STANFORD PRINCETON
MAIN FRONT WATER COMMERCE INDUSTRIAL AIRPORT RAILROAD MISSION PALMETTO
""".split()

TWO_WORD_NAMES = """
MEMORY HILL|LUKE HICKS|WARM MOUNTAIN|SPRING VALLEY|PINE CREEK|OLD MILL|BLUE HERON|
RED OAK|SILVER LAKE|EAGLE ROCK|DEER CREEK|CEDAR HEIGHTS|TWIN OAKS|
STONE MOUNTAIN|WILLOW SPRINGS|LAUREL FOREST|COUNTRY CLUB|MARTIN LUTHER KING|
ROLLING HILLS|HIDDEN VALLEY|WHITE OAK|BLACK BEAR|
HUNTERS CREEK|MILL POND|PEACH ORCHARD|CHERRY BLOSSOM|OLD FORT|SAINT JAMES|
SAINT ANDREWS|MOUNT VERNON|MOUNT PLEASANT|CANYON CREEK|RIVER BEND FARM|GOLDEN GATE|
VILLAGE GREEN|FOREST HILL|HARBOR POINT|SPRING MEADOW|CRYSTAL LAKE
""".replace("\n", "").split("|")

SPANISH_NAMES = """
LA BREA|EL CAMINO|LOS ROBLES|LAS FLORES|DEL MAR|DE LA VINA|LA PALOMA|EL DORADO|
LOS ALAMOS|LAS PALMAS|LA SALLE|DEL RIO|EL MONTE|LA CIENEGA|LOS FELIZ|LAS LOMAS|
DE ANZA|LA JOLLA|EL PRADO|DEL ORO
""".replace("\n", "").split("|")

NO_ROAD_TYPE = ["BROADWAY", "THE ALAMEDA", "KINGSWAY"]

# abbreviated road types with rough frequencies
ROAD_TYPE_WEIGHTS = {
    "ST": 20, "AVE": 14, "RD": 16, "DR": 14, "LN": 9, "CT": 7, "CIR": 5, "BLVD": 4,
    "WAY": 4, "PL": 4, "TRL": 3, "HWY": 2, "PKWY": 2, "TER": 2, "LOOP": 2, "CV": 1,
    "XING": 1, "RDG": 1, "PATH": 1, "RUN": 1, "SQ": 1, "PIKE": 1, "VW": 1, "GRV": 1,
    "HOLW": 1, "MNR": 1, "GLN": 1, "ALY": 1, "TRCE": 1, "EXPY": 1,
}

PREDIRS = ["N", "S", "E", "W", "N", "S", "E", "W", "NE", "NW", "SE", "SW"]


def _ordinal(n: int) -> str:
    if 10 <= n % 100 <= 20:
        suffix = "TH"
    else:
        suffix = {1: "ST", 2: "ND", 3: "RD"}.get(n % 10, "TH")
    return f"{n}{suffix}"


def _street_name(rng: random.Random) -> str:
    u = rng.random()
    if u < 0.07:
        return _ordinal(rng.randint(1, 99))
    if u < 0.11:
        return rng.choice(SPANISH_NAMES)
    if u < 0.27:
        return rng.choice(TWO_WORD_NAMES)
    if u < 0.40:
        return f"{rng.choice(NAME_WORDS)} {rng.choice(NAME_WORDS)}"
    return rng.choice(NAME_WORDS)


def _house_number(rng: random.Random) -> str:
    digits = rng.choices([1, 2, 3, 4, 5], weights=[3, 10, 30, 40, 17])[0]
    lo = 1 if digits == 1 else 10 ** (digits - 1)
    return str(rng.randint(lo, 10 ** digits - 1))


def _allowed(street: str, lex) -> bool:
    return not any(lex.is_road_type(w) or lex.is_directional(w) for w in street.split())


def generate_rows(seed: int = SAMPLE_SEED, streets_per_zip=(7, 14), zips_per_city=(1, 4),
                  duplicate_rate: float = 0.03) -> list[dict]:
    """Generate sample rows in the reference CSV schema (without writing them)."""
    lex = default_lexicons()
    rng = random.Random(seed)
    rows: list[dict] = []
    used_zips = set(FIXED_ZIPS.values())

    for state in sorted(STATE_CITIES):
        (lo, hi), cities = STATE_CITIES[state]
        for city in cities:
            assert not any(lex.is_road_type(w) for w in city.split()), city
            n_zips = rng.randint(*zips_per_city)
            zips = []
            if (state, city) in FIXED_ZIPS:
                zips.append(FIXED_ZIPS[(state, city)])
            while len(zips) < n_zips:
                z = f"{rng.randint(lo, hi):03d}{rng.randint(1, 99):02d}"
                if z not in used_zips:
                    used_zips.add(z)
                    zips.append(z)
            for zip_code in zips:
                seen = set()
                target = rng.randint(*streets_per_zip)
                while len(seen) < target:
                    street = _street_name(rng)
                    if not _allowed(street, lex):
                        continue
                    if rng.random() < 0.006:
                        street, road = rng.choice(NO_ROAD_TYPE), ""
                    else:
                        road = rng.choices(list(ROAD_TYPE_WEIGHTS), list(ROAD_TYPE_WEIGHTS.values()))[0]
                    pre = rng.choice(PREDIRS) if rng.random() < 0.15 else ""
                    post = rng.choice(PREDIRS) if rng.random() < 0.08 and road else ""
                    if pre and post and pre == post:
                        post = ""
                    key = (pre, street, road, post)
                    if key in seen:
                        continue
                    seen.add(key)
                    row = {
                        "house_number": _house_number(rng),
                        "predirectional": pre,
                        "street_name": street,
                        "road_type": road,
                        "postdirectional": post,
                        "city": city,
                        "state": state,
                        "zip": zip_code,
                    }
                    rows.append(row)
                    if rng.random() < duplicate_rate:
                        rows.append(dict(row, house_number=_house_number(rng)))

    for i, row in enumerate(rows, start=1):
        row["id"] = f"S{i:06d}"
    return rows


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def sample_corpus_path() -> Path:
    """Path of the bundled sample corpus CSV."""
    return Path(str(resources.files("addrbench").joinpath("data/sample_addresses.csv")))


if __name__ == "__main__":
    out = Path(__file__).with_name("data") / "sample_addresses.csv"
    out.write_text(render_csv(generate_rows()), encoding="utf-8")
    print(out)
