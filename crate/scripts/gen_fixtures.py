#!/usr/bin/env python3
"""Regenerate the vendored newform fixtures with PARI/GP (cypari2).

Usage: python3 scripts/gen_fixtures.py [out_dir]
"""
import json
import sys
from fractions import Fraction
from pathlib import Path

import cypari2

pari = cypari2.Pari()
pari.allocatemem(1 << 30)

PRIME_BOUND = 1010

# label, mfinit argument, Conrey index of the character, field polynomial
# (constant first), a selector for a_2 when the space has several orbits, cm discriminant
FORMS = [
    ("11.2.a.a", "[11,2]", 1, [0, 1], None, None),
    ("37.2.a.a", "[37,2]", 1, [0, 1], -2, None),
    ("13.2.e.a", "[13,2,Mod(4,13)]", 4, [1, -1, 1], None, None),
    ("7.3.b.a", "[7,3,Mod(6,7)]", 6, [0, 1], None, -7),
    ("32.2.a.a", "[32,2]", 1, [0, 1], None, -4),
    ("23.1.b.a", "[23,1,Mod(22,23)]", 22, [0, 1], None, -23),
]


def char_json(modulus, conrey):
    if modulus == 1 or conrey == 1:
        return {"modulus": 1, "order": 1, "exps": [[0, 0]]}
    g = pari(f"znstar({modulus},1)")
    chi = pari.znconreychar(g, conrey)
    order = int(pari.charorder(g, chi))
    exps = []
    for u in range(1, modulus):
        if pari.gcd(u, modulus) != 1:
            continue
        a = Fraction(str(pari.chareval(g, chi, u)))
        exps.append([u, int(a * order)])
    return {"modulus": modulus, "order": order, "exps": exps}


def coords(value, degree):
    v = pari.lift(value)
    if degree == 1:
        return [str(Fraction(str(v)))]
    out = []
    for i in range(degree):
        out.append(str(Fraction(str(pari.polcoef(v, i)))))
    return out


def primes():
    return [int(p) for p in pari.primes([2, PRIME_BOUND])]


def form_record(label, mf_arg, conrey, poly, a2, cm):
    level, weight = (int(x) for x in mf_arg.strip("[]").split(",")[:2])
    mf = pari(f"mfinit({mf_arg},0)")
    forms = pari.mfeigenbasis(mf)
    top = primes()[-1]
    chosen = None
    for f in forms:
        c = pari.mfcoefs(f, top)
        if a2 is None or int(pari.lift(c[2])) == a2:
            chosen = c
            break
    degree = len(poly) - 1
    ch = char_json(level, conrey)
    if degree > 1:
        # the coefficient variable is ζ_o for o = order of ε
        ch["zeta"] = ["0", "1"]
    ap = [{"l": l, "coords": coords(chosen[l], degree)} for l in primes()]
    rec = {
        "label": label,
        "level": level,
        "weight": weight,
        "char": ch,
        "field_poly": poly,
        "power_basis": True,
        "ap": ap,
    }
    if cm is not None:
        rec["cm_disc"] = cm
    return rec


def trivial_twist(degree):
    ident = ["0", "1"] if degree > 1 else ["0"]
    return {"auto_image": ident, "char": {"modulus": 1, "order": 1, "exps": [[0, 0]]}}


def listed_twists(rec):
    # inner twists as listed by the LMFDB for these labels
    degree = len(rec["field_poly"]) - 1
    out = [trivial_twist(degree)]
    if rec["label"] == "13.2.e.a":
        inv = char_json(13, 4)
        inv["exps"] = [[u, (-e) % inv["order"]] for u, e in inv["exps"]]
        inv["zeta"] = ["0", "1"]
        out.append({"auto_image": ["1", "-1"], "char": inv})
        rec["automorphisms"] = [["0", "1"], ["1", "-1"]]
    elif "cm_disc" in rec:
        d = rec["cm_disc"]
        m = abs(d)
        exps = [[u, 0 if pari.kronecker(d, u) == 1 else 1] for u in range(1, m) if pari.gcd(u, m) == 1]
        out.append({"auto_image": ["0"], "char": {"modulus": m, "order": 2, "exps": exps}})
    rec["inner_twists"] = out


def check_conjugate(rec):
    # f̄ = f ⊗ ε⁻¹ on the order-6 fixture: conj(a_ℓ) ε(ℓ) = a_ℓ
    if rec["label"] != "13.2.e.a":
        return
    t = pari("Mod(t, t^2-t+1)")
    exps = dict(map(tuple, rec["char"]["exps"]))
    for entry in rec["ap"]:
        l = entry["l"]
        if l == 13:
            continue
        c0, c1 = (pari(x) for x in entry["coords"])
        a = c0 + c1 * t
        conj = c0 + c1 * (1 - t)
        eps = t ** exps[l % 13]
        assert conj * eps == a, l


def twisted(rec, d, label):
    out = json.loads(json.dumps(rec))
    out["label"] = label
    out["level"] = rec["level"] * 16
    for entry in out["ap"]:
        k = int(pari.kronecker(d, entry["l"]))
        entry["coords"] = [str(Fraction(c) * k) for c in entry["coords"]]
    out.pop("inner_twists", None)
    return out


def rigged(rec, label):
    # a_ℓ(g) = a_ℓ(f) + 7 t_ℓ with t_ℓ = ±1; level 13 forces a different form
    out = json.loads(json.dumps(rec))
    out["label"] = label
    out["level"] = 13
    for entry in out["ap"]:
        a = Fraction(entry["coords"][0])
        if entry["l"] == 11:
            a = Fraction(3)
        else:
            a += 7 if a <= 0 else -7
        entry["coords"] = [str(a)]
    out.pop("inner_twists", None)
    return out


def main():
    out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "crates/adelic/fixtures")
    out_dir.mkdir(parents=True, exist_ok=True)
    records = {}
    for spec in FORMS:
        rec = form_record(*spec)
        listed_twists(rec)
        check_conjugate(rec)
        records[rec["label"]] = rec
    base = records["11.2.a.a"]
    records["11.2.a.a-tw-4"] = twisted(base, -4, "11.2.a.a-tw-4")
    records["11.2.a.a-rig7"] = rigged(base, "11.2.a.a-rig7")
    for label, rec in records.items():
        path = out_dir / f"{label}.json"
        path.write_text(json.dumps(rec, indent=1) + "\n")
        print(path)


if __name__ == "__main__":
    main()
