"""Fill every input in inputs/ and print the headline numbers.

    python3 scripts/run_examples.py [--out DIR]
"""

import argparse
from pathlib import Path

from concave_forge.cli import InputError, parse_input, parse_pencil, run_fill
from concave_forge.lefschetz import build_pencil_assembly, validate_pencil
from concave_forge.ledger import replay_ledger

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, help="write each Kirby script here")
    args = ap.parse_args()
    for path in sorted((ROOT / "inputs").glob("*.json")):
        text = path.read_text()
        if '"pencil"' in text:
            p = parse_pencil(text)
            v = validate_pencil(p)
            chi = build_pencil_assembly(p).chi if v.ok else "-"
            print(f"{path.name:24s} pencil m={p.m} n={p.sections} verdict={v.label} chi={chi}")
            continue
        try:
            doc = parse_input(text)
        except InputError as exc:
            print(f"{path.name:24s} rejected: {exc.issues[0]}")
            continue
        out = run_fill(doc, with_ledger=True)
        s = out.summary
        replayed = replay_ledger(out.ledger).ok
        print(f"{path.name:24s} G1={s['G1']} n_right={s['n_right']} |R|={s['R_length']} "
              f"chi={s['euler_characteristic']} moves={sum(s['moves'].values())} replay={'ok' if replayed else 'FAILED'}")
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / (path.stem + ".kirby")).write_text(out.kirby)


if __name__ == "__main__":
    main()
