"""Builds the AIVDM test corpus and its reference-decoder expectations.

Real sentences are harvested from the sample messages bundled with the pyais
source distribution; synthetic messages are encoded with pyais so the corpus
covers sentinel values, Class B reports and multi-fragment Type 5 messages.
Expected values come from pyais' decoder and an independent XOR checksum.

usage: ais_corpus.py <pyais-src-dir> <out-dir>
"""
import functools
import json
import pathlib
import random
import re
import sys

from pyais import NMEAMessage, decode
from pyais.encode import encode_dict

LINE_RE = re.compile(r"[!$][A-Z]{2}VD[MO],[^\"' \\]*\*[0-9A-Fa-f]{2}")


def checksum_ok(line):
    body, _, tail = line[1:].partition("*")
    want = functools.reduce(lambda acc, ch: acc ^ ord(ch), body, 0)
    try:
        return int(tail[:2], 16) == want
    except ValueError:
        return False


def harvest(src):
    seen, groups = set(), []
    for path in sorted(pathlib.Path(src).rglob("*.py")):
        lines = LINE_RE.findall(path.read_text(errors="ignore"))
        i = 0
        while i < len(lines):
            try:
                head = NMEAMessage(lines[i].encode())
            except Exception:
                i += 1
                continue
            cnt = head.frag_cnt
            group = lines[i : i + cnt]
            i += max(cnt, 1)
            if len(group) != cnt:
                continue
            try:
                frags = [NMEAMessage(g.encode()) for g in group]
            except Exception:
                continue
            if [f.frag_num for f in frags] != list(range(1, cnt + 1)):
                continue
            if not all(checksum_ok(g) for g in group):
                continue
            key = tuple(group)
            if key in seen:
                continue
            try:
                decode(*[g.encode() for g in group])
            except Exception:
                continue
            seen.add(key)
            groups.append(list(group))
    return groups


def rand_dynamic(rng, msg_type):
    d = {"type": msg_type, "mmsi": rng.randrange(0, 10**9)}
    d["lon"] = 181 if rng.random() < 0.08 else round(rng.uniform(-180, 180), 6)
    d["lat"] = 91 if rng.random() < 0.08 else round(rng.uniform(-90, 90), 6)
    d["speed"] = 102.3 if rng.random() < 0.08 else rng.randrange(0, 1023) / 10
    d["course"] = rng.randrange(3600, 4096) / 10 if rng.random() < 0.1 else rng.randrange(0, 3600) / 10
    d["heading"] = 511 if rng.random() < 0.1 else rng.randrange(0, 360)
    d["second"] = rng.choice([60, 61, 62, 63]) if rng.random() < 0.1 else rng.randrange(0, 60)
    if msg_type != 18:
        d["status"] = rng.randrange(0, 16)
    return d


NAMES = ["GLOVIS CHORUS", "JUSTICE", "BOSTON PILOT CHELSEA", "SEATOW RESCUE 2", "BOLERO",
         "", "A", "MAX LENGTH VESSEL NM", "NORTHERN LIGHT", "HARBOR TUG 7"]


def rand_static(rng, mmsi=None, name=None):
    return {
        "type": 5,
        "mmsi": mmsi if mmsi is not None else rng.randrange(0, 10**9),
        "imo": rng.randrange(0, 2**30),
        "callsign": "".join(rng.choice("ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789") for _ in range(5)),
        "shipname": name if name is not None else rng.choice(NAMES),
        "ship_type": rng.randrange(0, 100),
        "to_bow": rng.randrange(0, 512),
        "to_stern": rng.randrange(0, 512),
        "to_port": rng.randrange(0, 64),
        "to_starboard": rng.randrange(0, 64),
        "epfd": rng.randrange(0, 16),
        "draught": rng.randrange(0, 256) / 10,
        "destination": "BOSTON",
    }


def opt_int(v):
    return None if v is None else int(v)


def expected(group, first_line):
    msg = decode(*[g.encode() for g in group]).asdict()
    t = int(msg["msg_type"])
    out = {"first_line": first_line, "msg_type": t, "mmsi": int(msg["mmsi"])}
    if t in (1, 2, 3, 18):
        out.update(lon=msg["lon"], lat=msg["lat"], speed_knots=msg["speed"],
                   course=msg["course"], heading=opt_int(msg["heading"]), second=opt_int(msg["second"]))
    elif t == 5:
        out.update(imo=int(msg["imo"]), shipname=msg["shipname"], ship_type=int(msg["ship_type"]),
                   to_bow=int(msg["to_bow"]), to_stern=int(msg["to_stern"]), to_port=int(msg["to_port"]),
                   to_starboard=int(msg["to_starboard"]), draught=msg["draught"], epfd=int(msg["epfd"]))
    return out


def main(src, out_dir):
    rng = random.Random(8062020)
    groups = harvest(src)
    n_real = len(groups)
    synth = []
    for i in range(420):
        kind = rng.choice([1, 2, 3, 18, 18, 5])
        if kind == 5:
            d = rand_static(rng)
        else:
            d = rand_dynamic(rng, kind)
        synth.append(encode_dict(d, talker_id="AI", radio_channel=rng.choice("AB"), seq_id=i % 10))
    synth.append(encode_dict(rand_static(rng, 440292000, "GLOVIS CHORUS"), talker_id="AI", seq_id=3))
    groups += synth
    rng.shuffle(groups)

    lines, exp, checks = [], [], []
    for group in groups:
        exp.append(expected(group, len(lines)))
        for g in group:
            lines.append(g)
            checks.append(checksum_ok(g))
        if rng.random() < 0.03 and len(group) == 1:
            fields = group[0].split(",")
            payload = list(fields[5])
            if not payload:
                continue
            payload[0] = "0" if payload[0] != "0" else "1"
            fields[5] = "".join(payload)
            bad = ",".join(fields)
            lines.append(bad)
            checks.append(checksum_ok(bad))
    out = pathlib.Path(out_dir)
    (out / "ais_corpus.nmea").write_text("\n".join(lines) + "\n")
    (out / "ais_corpus_checksums.txt").write_text("".join("1\n" if c else "0\n" for c in checks))
    with open(out / "ais_corpus_expected.jsonl", "w") as fh:
        for e in exp:
            fh.write(json.dumps(e, sort_keys=True) + "\n")
    print(f"{n_real} real messages, {len(synth)} synthetic, {len(lines)} sentences, "
          f"{sum(1 for c in checks if not c)} corrupted")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
