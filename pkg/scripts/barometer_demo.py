"""Seeing versus doing on the Storm -> Barometer model.

Observing a falling barometer raises the probability of a storm; forcing the
needle down leaves it at the prior.

    python3 scripts/barometer_demo.py [fixtures/barometer.json]
"""

import sys
from pathlib import Path

from causalgames import interventional_query, observational_query
from causalgames.io import load_model

ROOT = Path(__file__).resolve().parents[1]


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    model = load_model(argv[0] if argv else ROOT / "fixtures" / "barometer.json")
    prior = observational_query(model, "Storm")
    print(f"{'query':<28} {'P(Storm=0)':>11} {'P(Storm=1)':>11}")
    rows = [("prior", prior)]
    for reading in model.domain("Barometer"):
        rows.append((f"see Barometer={reading}", observational_query(model, "Storm", {"Barometer": reading})))
        rows.append((f"do(Barometer={reading})", interventional_query(model, {"Barometer": reading}, "Storm")))
    for label, dist in rows:
        print(f"{label:<28} {dist[0]:>11.6f} {dist[1]:>11.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
