#!/usr/bin/env python3
"""Generate src/unicode_tables.inc from Python's bundled Unicode database.

The tables drive canonical (NFC) normalization in src/unicode.cpp:
  - kCcc:        nonzero canonical combining classes
  - kDecomp:     full canonical decompositions (NFD), Hangul excluded
  - kCompose:    primary composite pairs (recomposable two-char decompositions)

Hangul syllables are handled algorithmically at runtime and carry no table
entries. Run from the repository root:  python3 scripts/gen_unicode_tables.py
"""

import sys
import unicodedata

HANGUL_BASE, HANGUL_END = 0xAC00, 0xD7A3
SURROGATE_LO, SURROGATE_HI = 0xD800, 0xDFFF

def main() -> int:
    ccc_entries = []
    decomp_entries = []   # (cp, offset, len)
    decomp_data = []      # flat codepoints
    compose_pairs = []    # (first, second, composed)

    for cp in range(0x110000):
        if HANGUL_BASE <= cp <= HANGUL_END or SURROGATE_LO <= cp <= SURROGATE_HI:
            continue
        ch = chr(cp)
        ccc = unicodedata.combining(ch)
        if ccc:
            ccc_entries.append((cp, ccc))
        nfd = unicodedata.normalize("NFD", ch)
        if nfd != ch:
            decomp_entries.append((cp, len(decomp_data), len(nfd)))
            decomp_data.extend(ord(c) for c in nfd)
        raw = unicodedata.decomposition(ch)
        if raw and not raw.startswith("<"):
            parts = [int(p, 16) for p in raw.split()]
            if len(parts) == 2:
                # A pair recomposes iff NFC round-trips the character
                # (this folds in the composition-exclusion list).
                if unicodedata.normalize("NFC", nfd) == ch:
                    compose_pairs.append((parts[0], parts[1], cp))

    compose_pairs.sort()

    out = sys.stdout
    out.write("// Generated by scripts/gen_unicode_tables.py -- do not edit.\n")
    out.write("// Unicode version: %s\n\n" % unicodedata.unidata_version)

    out.write("static constexpr CccEntry kCcc[] = {\n")
    for cp, ccc in ccc_entries:
        out.write("    {0x%04X, %d},\n" % (cp, ccc))
    out.write("};\n\n")

    out.write("static constexpr char32_t kDecompData[] = {\n")
    for i in range(0, len(decomp_data), 8):
        chunk = decomp_data[i:i + 8]
        out.write("    " + " ".join("0x%04X," % c for c in chunk) + "\n")
    out.write("};\n\n")

    out.write("static constexpr DecompEntry kDecomp[] = {\n")
    for cp, off, ln in decomp_entries:
        out.write("    {0x%04X, %d, %d},\n" % (cp, off, ln))
    out.write("};\n\n")

    out.write("static constexpr ComposeEntry kCompose[] = {\n")
    for a, b, c in compose_pairs:
        out.write("    {0x%04X, 0x%04X, 0x%04X},\n" % (a, b, c))
    out.write("};\n")
    return 0

if __name__ == "__main__":
    sys.exit(main())
