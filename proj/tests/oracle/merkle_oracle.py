#!/usr/bin/env python3
"""Reference Merkle root for trace files, written against hashlib only.

usage: merkle_oracle.py FILE...
"""
import base64
import hashlib
import struct
import sys

TAG = b"CTEG-NODE-V1"


def root_digest(path):
    lines = open(path, "rb").read().decode().splitlines()[1:]
    nodes = {}
    for line in lines:
        node, parent, ts, typ, payload = line.split("\t")
        nodes[node] = (parent, int(ts), typ.encode(), base64.b64decode(payload))
    children = {n: [] for n in nodes}
    root = None
    for n, (parent, *_rest) in nodes.items():
        if parent == "-":
            root = n
        else:
            children[parent].append(n)

    def digest(n):
        _, ts, typ, payload = nodes[n]
        kids = sorted(children[n], key=lambda k: (nodes[k][1], bytes.fromhex(k)))
        pre = TAG + struct.pack("<I", len(typ)) + typ + struct.pack("<q", ts)
        pre += hashlib.sha256(payload).digest() + struct.pack("<I", len(kids))
        pre += b"".join(digest(k) for k in kids)
        return hashlib.sha256(pre).digest()

    return digest(root).hex()


for p in sys.argv[1:]:
    print(p.rsplit("/", 1)[-1], root_digest(p))
