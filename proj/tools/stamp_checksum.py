#!/usr/bin/env python3
"""Recompute the "checksum" field of a versioned data file in place.

The checksum is the SHA-256 of the compact, key-sorted JSON serialization of
the document with the "checksum" member removed.
"""
import hashlib
import json
import sys


def digest(doc):
    body = {k: v for k, v in doc.items() if k != "checksum"}
    text = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def main(paths):
    for path in paths:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
        doc["checksum"] = digest(doc)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(doc, f, indent=1, ensure_ascii=False)
            f.write("\n")
        print(f"{path}: {doc['checksum']}")


if __name__ == "__main__":
    main(sys.argv[1:])
