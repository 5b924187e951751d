#!/usr/bin/env python3
"""Build the offline fixture corpus from ENSDF decay datasets in JSON form.

Input is the ENSDF_JSON directory shipped with the paceENSDF package
(one file per parent/level/decay-mode dataset). Output mirrors the CSV
projection served by the IAEA Live Chart endpoint, one file per dataset
key, named <A><element>_<kind>.csv so the directory doubles as a primed
cache.

Usage: build_fixtures.py <ENSDF_JSON dir> <out dir>
"""

import csv
import glob
import io
import json
import math
import os
import re
import sys

PROGENITORS = [
    (90, 232), (93, 237), (92, 238), (92, 235), (19, 40), (89, 225),
    (88, 226), (71, 177), (42, 99), (41, 96), (41, 95), (41, 92), (41, 90),
]

DECAY_CODES = {
    "alphaDecay": "A",
    "betaMinusDecay": "B-",
    "electronCaptureBetaPlusDecay": "EC",
}

SYMBOLS = (
    "n H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca Sc Ti V Cr Mn Fe Co "
    "Ni Cu Zn Ga Ge As Se Br Kr Rb Sr Y Zr Nb Mo Tc Ru Rh Pd Ag Cd In Sn Sb Te "
    "I Xe Cs Ba La Ce Pr Nd Pm Sm Eu Gd Tb Dy Ho Er Tm Yb Lu Hf Ta W Re Os Ir "
    "Pt Au Hg Tl Pb Bi Po At Rn Fr Ra Ac Th Pa U Np Pu Am Cm Bk Cf Es Fm Md No "
    "Lr Rf Db Sg Bh Hs Mt Ds Rg Cn Nh Fl Mc Lv Ts Og"
).split()

# Isomeric-transition branches are not part of the decay-dataset files and
# are supplied from evaluated adopted values.
#   level_modes: (Z, A, level keV) -> extra (mode, percent) pairs
#   it_gammas:   (Z, A, level keV) -> IT photon rows
#   transitions: (Z, A) -> extra (start, end, energy) transitions
IT_LEVEL_MODES = {
    (43, 99, 142.6836): [("IT", 99.9963)],
    (91, 234, 73.92): [("IT", 0.16)],
    (71, 177, 970.1757): [("IT", 22.7)],
}
IT_GAMMAS = {
    (43, 99, 142.6836): [
        # energy, unc, intensity, unc, start, end
        (140.511, 0.001, 89.0, 0.4, 140.511, 0.0),
        (142.63, 0.0, 0.0187, 0.0, 142.6836, 0.0),
        (2.1726, 0.0004, None, None, 142.6836, 140.511),
    ],
}
EXTRA_TRANSITIONS = {
    (71, 177): [(970.1757, 0.0, 970.1757)],
}
# Branching overrides for levels whose dataset branching omits the IT share.
BRANCH_OVERRIDES = {
    (43, 99, 142.6836, "B-"): 0.0037,
}

DR_HEADER = [
    "energy", "unc_en", "intensity", "unc_i", "start_level_energy",
    "end_level_energy", "p_z", "p_n", "p_symbol", "p_energy", "unc_pe",
    "p_half_life_sec", "unc_hls", "decay", "decay_%", "unc_d", "d_z", "d_n",
    "d_symbol",
]
LV_HEADER = [
    "z", "n", "symbol", "energy", "unc_e", "jp", "half_life", "unit_hl",
    "half_life_sec", "unc_hls", "decay_1", "decay_1_%", "unc_1", "decay_2",
    "decay_2_%", "unc_2", "decay_3", "decay_3_%", "unc_3",
]
TR_HEADER = [
    "z", "n", "symbol", "start_level_energy", "end_level_energy", "energy",
    "unc_en", "relative_intensity", "unc_ri", "multipolarity",
]

LEVEL_MERGE_KEV = 0.5


def num(x):
    if x is None:
        return ""
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return ""
    s = "%.7g" % x
    if "e" in s:
        return s
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s


def scaled(x, factor):
    """Normalized intensities keep four significant digits."""
    if factor == 1.0:
        return num(x)
    return num(float("%.4g" % (x * factor)))


def level_energy(v):
    """Level energies may carry an unknown offset, e.g. '73.92+X'."""
    if isinstance(v, (int, float)):
        return float(v)
    m = re.match(r"\s*([0-9.]+)", str(v))
    return float(m.group(1)) if m else 0.0


def jpi(spins):
    out = []
    for s in spins or []:
        sr = s.get("spinReal")
        if sr is None:
            continue
        if abs(sr - round(sr)) < 1e-6:
            j = str(int(round(sr)))
        else:
            j = "%d/2" % int(round(sr * 2))
        p = {"positive": "+", "negative": "-"}.get(s.get("paritySign"), "")
        txt = j + p
        if s.get("spinIsTentative") or s.get("parityIsTentative"):
            txt = "(" + txt + ")"
        out.append(txt)
    return ",".join(out)


def ident(z, a):
    return "%d%s" % (a, SYMBOLS[z].lower())


class Dataset:
    def __init__(self, path):
        d = json.load(open(path))
        self.path = path
        self.pz, self.pa = d["parentAtomicNumber"], d["parentAtomicMass"]
        self.dz, self.da = d["daughterAtomicNumber"], d["daughterAtomicMass"]
        self.mode = DECAY_CODES[d["decayMode"]]
        pd = d["parentDecay"][0]
        self.p_level = level_energy(d["levelEnergyParentDecay"])
        self.p_level_unc = pd.get("dParentDecayLevelEnergy") or 0.0
        self.p_offset = "X" in str(d["levelEnergyParentDecay"])
        hl = (pd.get("halfLife") or [{}])[0]
        self.p_hl = hl.get("halfLifeConverted")
        self.p_hl_unc = hl.get("dHalfLifeConverted")
        self.p_hl_best = hl.get("halfLifeBest")
        self.p_hl_unit = hl.get("unitHalfLifeBest")
        self.p_jp = jpi(pd.get("spins"))
        nr = d["decaySchemeNormalization"][0]["normalizationRecord"][0]
        self.br = nr.get("multiplerBranchingRatio") or 1.0
        self.dbr = nr.get("dMultiplerBranchingRatio") or 0.0
        self.nr = nr.get("multiplerPhotonIntensity") or 1.0
        self.nb = nr.get("multiplerLeptonIntensity") or 1.0
        self.levels = d["levelScheme"]

    @property
    def branch_percent(self):
        over = BRANCH_OVERRIDES.get((self.pz, self.pa, self.p_level, self.mode))
        return over if over is not None else self.br * 100.0


def load_all(src):
    by_parent, by_daughter = {}, {}
    for f in sorted(glob.glob(os.path.join(src, "j_input_*.json"))):
        ds = Dataset(f)
        # Datasets for an isomer of unknown energy ('0+X') are skipped: they
        # cannot be told apart from the ground state.
        if ds.p_offset and ds.p_level == 0.0:
            continue
        by_parent.setdefault((ds.pz, ds.pa), []).append(ds)
        by_daughter.setdefault((ds.dz, ds.da), []).append(ds)
    return by_parent, by_daughter


def closure(by_parent):
    seen, order, stack = set(), [], list(reversed(PROGENITORS))
    while stack:
        key = stack.pop()
        if key in seen:
            continue
        seen.add(key)
        order.append(key)
        for ds in by_parent.get(key, []):
            d = (ds.dz, ds.da)
            if d != key and d not in seen:
                stack.append(d)
    return order


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r)
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def dr_rows(key, datasets, kind):
    z, a = key
    rows = []
    for ds in sorted(datasets, key=lambda d: (d.p_level, d.mode, d.path)):
        base_p = [z, a - z, SYMBOLS[z], num(ds.p_level), num(ds.p_level_unc),
                  num(ds.p_hl), num(ds.p_hl_unc)]
        base_d = [ds.mode, num(ds.branch_percent), num(ds.dbr * 100.0),
                  ds.dz, ds.da - ds.dz, SYMBOLS[ds.dz]]
        found = []
        for lv in ds.levels:
            e_lv = level_energy(lv["levelEnergy"])
            if kind == "a":
                for r in lv.get("alphaDecay", []):
                    found.append((r.get("alphaEnergy"), r.get("dAlphaEnergy"), r.get("alphaIntensity"),
                                  r.get("dAlphaIntensity"), ds.br * ds.nb, None, e_lv))
            elif kind == "bm":
                for r in lv.get("betaMinusDecay", []):
                    found.append((r.get("averageBetaMinusEnergy"), r.get("dAverageBetaMinusEnergy"),
                                  r.get("betaMinusIntensity"), r.get("dBetaMinusIntensity"),
                                  ds.br * ds.nb, None, e_lv))
            elif kind == "bp":
                # The combined channel lists every fed level; a level fed by
                # electron capture alone has no positron energy.
                for r in lv.get("betaPlusDecay", []):
                    i = r.get("betaPlusIntensity")
                    iec = r.get("electronCaptureIntensity")
                    if not i and not iec:
                        continue
                    energy = r.get("averageBetaPlusEnergy") if i else ""
                    found.append((energy, r.get("dAverageBetaPlusEnergy") if i else "",
                                  i, r.get("dBetaPlusIntensity"), ds.br * ds.nb, None, e_lv,
                                  iec, r.get("dElectronCaptureIntensity")))
            elif kind == "g":
                for g in lv.get("gammaDecay", []):
                    found.append((g.get("gammaEnergy"), g.get("dGammaEnergy"),
                                  g.get("gammaIntensity"), g.get("dGammaIntensity"),
                                  ds.br * ds.nr, level_energy(g.get("levelEnergyInitial", e_lv)),
                                  level_energy(g.get("levelEnergyFinal", 0.0))))
        for item in found:
            energy, de, inten, dinten, factor, start, end = item[:7]
            if energy is None:
                continue
            if inten is None or (inten == 0 and not dinten):
                i_txt, di_txt = "", ""
            else:
                i_txt = scaled(inten, factor)
                di_txt = scaled(dinten or 0.0, factor)
            row = [num(energy) if energy != "" else "", num(de or 0.0) if energy != "" else "",
                   i_txt, di_txt, "" if start is None else num(start), num(end)] + base_p + base_d
            if kind == "bp":
                iec, diec = item[7], item[8]
                row += ["", ""] if not iec else [scaled(iec, factor), scaled(diec or 0.0, factor)]
            rows.append(row)
    if kind == "g":
        for (zz, aa, lvl), lines in IT_GAMMAS.items():
            if (zz, aa) != key:
                continue
            src = next(d for d in datasets if abs(d.p_level - lvl) < 1e-6)
            it_pct = dict(IT_LEVEL_MODES[(zz, aa, lvl)])["IT"]
            for e, de, i, di, s, t in lines:
                rows.append([num(e), num(de), num(i), num(di), num(s), num(t),
                             zz, aa - zz, SYMBOLS[zz], num(lvl), num(src.p_level_unc),
                             num(src.p_hl), num(src.p_hl_unc), "IT", num(it_pct), "",
                             zz, aa - zz, SYMBOLS[zz]])
    return rows


class LevelTable:
    def __init__(self):
        self.levels = []  # dicts: energy, unc, jp, hl, hl_unc, best, unit, modes

    def find(self, e):
        best = None
        for lv in self.levels:
            d = abs(lv["energy"] - e)
            if d <= LEVEL_MERGE_KEV and (best is None or d < abs(best["energy"] - e)):
                best = lv
        return best

    def add(self, e, unc=0.0, jp="", hl=None, hl_unc=None, best=None, unit=None):
        lv = self.find(e)
        if lv is None:
            lv = {"energy": e, "unc": unc or 0.0, "jp": jp, "hl": hl, "hl_unc": hl_unc,
                  "best": best, "unit": unit, "modes": []}
            self.levels.append(lv)
            return lv
        if not lv["jp"] and jp:
            lv["jp"] = jp
        if lv["hl"] is None and hl is not None:
            lv.update(hl=hl, hl_unc=hl_unc, best=best, unit=unit)
        return lv


def level_scheme(key, by_parent, by_daughter):
    z, a = key
    table = LevelTable()
    gammas = []
    feeders = sorted(by_daughter.get(key, []), key=lambda d: (-len(d.levels), d.path))
    for ds in feeders:
        # Levels listed twice at one energy (an 'E+X' isomer beside a level at
        # E) collapse into one; the isomer's properties win.
        local = {}
        for lv in ds.levels:
            e = level_energy(lv["levelEnergy"])
            iso = (lv.get("isomerDecay") or [{}])[0]
            hl = iso.get("halfLifeConverted")
            entry = local.setdefault(e, {"unc": lv.get("dLevelEnergy") or 0.0, "jp": "", "hl": None,
                                         "hl_unc": None, "best": None, "unit": None, "gammas": []})
            if hl is not None and (entry["hl"] is None or hl > entry["hl"]):
                entry.update(hl=hl, hl_unc=iso.get("dHalfLifeConverted"), best=iso.get("halfLifeBest"),
                             unit=iso.get("unitHalfLifeBest"), jp=jpi(lv.get("spins")))
            elif not entry["jp"]:
                entry["jp"] = jpi(lv.get("spins"))
            entry["gammas"].extend(lv.get("gammaDecay", []))
        for e, entry in sorted(local.items()):
            table.add(e, entry["unc"], entry["jp"], entry["hl"], entry["hl_unc"], entry["best"], entry["unit"])
            for g in entry["gammas"]:
                gammas.append((e, level_energy(g.get("levelEnergyFinal", 0.0)), g))

    for ds in by_parent.get(key, []):
        lv = table.add(ds.p_level, ds.p_level_unc, ds.p_jp, ds.p_hl, ds.p_hl_unc, ds.p_hl_best, ds.p_hl_unit)
        if ds.p_hl is not None and (lv["hl"] is None or abs(lv["energy"] - ds.p_level) < 1e-9):
            lv.update(hl=ds.p_hl, hl_unc=ds.p_hl_unc, best=ds.p_hl_best, unit=ds.p_hl_unit)
            if ds.p_jp:
                lv["jp"] = ds.p_jp
        lv["modes"].append((ds.mode, ds.branch_percent, ds.dbr * 100.0))
    for (zz, aa, lvl), extra in IT_LEVEL_MODES.items():
        if (zz, aa) == key:
            lv = table.add(lvl)
            for mode, pct in extra:
                lv["modes"].append((mode, pct, 0.0))
    ground = table.add(0.0)
    if key not in by_parent:
        ground.update(hl=None, hl_unc=None, best="STABLE", unit="")

    trans = {}
    for start, end, g in gammas:
        s, t = table.find(start), table.find(end)
        if s is None or t is None or s is t or s["energy"] <= t["energy"]:
            continue
        k = (s["energy"], t["energy"])
        if k in trans:
            continue
        trans[k] = (g.get("gammaEnergy"), g.get("dGammaEnergy"), g.get("gammaIntensity"),
                    g.get("dGammaIntensity"), g.get("multipolarity") or "")
    for start, end, energy in EXTRA_TRANSITIONS.get(key, []):
        s, t = table.find(start), table.find(end)
        trans.setdefault((s["energy"], t["energy"]), (energy, 0.0, None, None, ""))

    lv_rows = []
    for lv in sorted(table.levels, key=lambda v: v["energy"]):
        modes = sorted(lv["modes"], key=lambda m: -m[1])[:3]
        cells = []
        for i in range(3):
            if i < len(modes):
                cells += [modes[i][0], num(modes[i][1]), num(modes[i][2])]
            else:
                cells += ["", "", ""]
        lv_rows.append([z, a - z, SYMBOLS[z], num(lv["energy"]), num(lv["unc"]), lv["jp"],
                        lv["best"] if isinstance(lv["best"], str) else num(lv["best"]), lv["unit"] or "", num(lv["hl"]), num(lv["hl_unc"])] + cells)
    tr_rows = []
    for (s, t), (e, de, i, di, mult) in sorted(trans.items(), reverse=True):
        tr_rows.append([z, a - z, SYMBOLS[z], num(s), num(t), num(e), num(de or 0.0),
                        "" if not i else num(i), "" if not i else num(di or 0.0), mult])
    return lv_rows, tr_rows


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    src, out = sys.argv[1], sys.argv[2]
    os.makedirs(out, exist_ok=True)
    by_parent, by_daughter = load_all(src)
    members = closure(by_parent)
    written = 0
    absent = []
    for key in members:
        stem = ident(*key)
        for kind in ("a", "bm", "bp", "g"):
            rows = dr_rows(key, by_parent.get(key, []), kind)
            header = DR_HEADER + (["intensity_ec", "unc_iec"] if kind == "bp" else [])
            if rows:
                write_csv(os.path.join(out, "%s_dr-%s.csv" % (stem, kind)), header, rows)
                written += 1
            else:
                absent.append("%s:dr-%s" % (stem, kind))
        absent += ["%s:dr-e" % stem, "%s:dr-x" % stem]
        lv_rows, tr_rows = level_scheme(key, by_parent, by_daughter)
        write_csv(os.path.join(out, stem + "_lv.csv"), LV_HEADER, lv_rows)
        written += 1
        if tr_rows:
            write_csv(os.path.join(out, stem + "_tr.csv"), TR_HEADER, tr_rows)
            written += 1
        else:
            absent.append(stem + ":tr")
    # Keys the data source has no data for, as a live run would record them.
    with open(os.path.join(out, "absent_registry.txt"), "w", newline="") as fh:
        fh.write("".join(k + "\n" for k in sorted(absent)))
    print("%d nuclides, %d files" % (len(members), written))


if __name__ == "__main__":
    main()
