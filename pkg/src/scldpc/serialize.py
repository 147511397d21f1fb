"""Code serialization: native JSON ("scc-v1") and alist interchange.

The native format stores parameters, seed, patch state, and every
permutation image, so a file round-trips to a structurally identical code
without re-deriving anything from the seed. The accumulator patch's delay
block is not a permutation and is therefore not listed; import re-creates
it from patch_kind. Rank repair's deleted 1-entries ride along in an
optional "cleared" field of [row, band position, block output row]
triples; the underlying permutation stays in "perms". Exports are
byte-deterministic for a given code.

The alist layout is the usual sparse interchange: dimensions, max degrees,
per-node degrees, then 1-based index lists padded with 0s to the max
degree. Only sensible for desk-scale M since it expands the matrix.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import ParseError
from .gf2 import MaskedPermutation, PermutationMap, ShiftBlock
from .lifting import LiftedCode, TermPatch
from .protograph import CodeParams, build_base

FORMAT = "scc-v1"


def code_to_dict(code):
    p = code.params
    perms = []
    cleared = []
    for (i, j) in sorted(code.blocks):
        blk = code.blocks[(i, j)]
        if isinstance(blk, PermutationMap):
            perms.append([i, j, list(blk.image)])
        elif isinstance(blk, MaskedPermutation):
            perms.append([i, j, list(blk.perm.image)])
            cleared.extend([i, j, r] for r in blk.cleared)
    doc = {
        "format": FORMAT,
        "dl": p.dl,
        "dr": p.dr,
        "L": p.L,
        "M": code.M,
        "modified": p.modified,
        "seed": code.seed,
        "patch_kind": code.patch.kind,
        "repair_attempts": code.patch.repair_attempts,
        "perms": perms,
    }
    if cleared:
        doc["cleared"] = cleared
    return doc


def export_code(code, path):
    with open(path, "w") as fh:
        json.dump(code_to_dict(code), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def code_from_dict(doc, source="<dict>"):
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    fmt = doc.get("format")
    if fmt != FORMAT:
        raise ParseError(f"{source}: unsupported format {fmt!r}, expected {FORMAT!r}")
    for key in ("dl", "dr", "L", "M", "modified", "seed", "patch_kind", "perms"):
        if key not in doc:
            raise ParseError(f"{source}: missing field {key!r}")
    try:
        params = CodeParams(dl=int(doc["dl"]), dr=int(doc["dr"]),
                            L=int(doc["L"]), modified=bool(doc["modified"]))
        patch = TermPatch(kind=str(doc["patch_kind"]),
                          repair_attempts=int(doc.get("repair_attempts", 0)))
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{source}: {exc}") from exc
    base = build_base(params)
    M = int(doc["M"])
    if M < 1:
        raise ParseError(f"{source}: M must be >= 1, got {M}")
    blocks = {}
    for entry in doc["perms"]:
        try:
            i, j, image = entry
            blocks[(int(i), int(j))] = PermutationMap(image)
        except (ValueError, TypeError) as exc:
            raise ParseError(f"{source}: bad perms entry {entry!r}: {exc}") from exc
    masks = {}
    for entry in doc.get("cleared", []):
        try:
            i, j, r = (int(t) for t in entry)
        except (ValueError, TypeError) as exc:
            raise ParseError(f"{source}: bad cleared entry {entry!r}: {exc}") from exc
        masks.setdefault((i, j), []).append(r)
    for key, rows in masks.items():
        blk = blocks.get(key)
        if not isinstance(blk, PermutationMap):
            raise ParseError(
                f"{source}: cleared entry names block {key}, which is not a "
                f"listed permutation")
        try:
            blocks[key] = MaskedPermutation(blk, rows)
        except ValueError as exc:
            raise ParseError(f"{source}: cleared rows for {key}: {exc}") from exc
    if patch.kind == "accumulator":
        blocks[(params.L, params.dr)] = ShiftBlock(M)
    expected = {(i, j) for i in range(1, base.rows + 1)
                for j, _ in base.row_band(i)}
    if set(blocks) != expected:
        missing = sorted(expected - set(blocks))[:4]
        extra = sorted(set(blocks) - expected)[:4]
        raise ParseError(
            f"{source}: block positions do not match the base matrix "
            f"(missing {missing}, unexpected {extra})")
    for (i, j), blk in blocks.items():
        if blk.M != M:
            raise ParseError(f"{source}: block ({i},{j}) has size {blk.M}, expected {M}")
    return LiftedCode(base=base, M=M, blocks=blocks,
                      seed=int(doc["seed"]), patch=patch)


def import_code(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return code_from_dict(doc, source=str(path))


def write_alist(code, path):
    """Write the expanded parity-check matrix in alist form."""
    dense = code.to_dense()
    n_chk, n_bit = dense.shape
    col_idx = [np.nonzero(dense[:, c])[0] + 1 for c in range(n_bit)]
    row_idx = [np.nonzero(dense[r, :])[0] + 1 for r in range(n_chk)]
    max_col = max(len(ix) for ix in col_idx)
    max_row = max(len(ix) for ix in row_idx)
    lines = [f"{n_bit} {n_chk}", f"{max_col} {max_row}"]
    lines.append(" ".join(str(len(ix)) for ix in col_idx))
    lines.append(" ".join(str(len(ix)) for ix in row_idx))
    for ix in col_idx:
        padded = list(ix) + [0] * (max_col - len(ix))
        lines.append(" ".join(str(t) for t in padded))
    for ix in row_idx:
        padded = list(ix) + [0] * (max_row - len(ix))
        lines.append(" ".join(str(t) for t in padded))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_alist(path):
    """Parse an alist file into a dense 0/1 matrix (checks x bits).

    Accepts both 0-padded and unpadded index lines.
    """
    with open(path) as fh:
        raw = fh.read().split("\n")

    def ints(lineno):
        if lineno >= len(raw):
            raise ParseError(f"{path}: line {lineno + 1}: unexpected end of file")
        try:
            return [int(t) for t in raw[lineno].split()]
        except ValueError as exc:
            raise ParseError(f"{path}: line {lineno + 1}: {exc}") from exc

    head = ints(0)
    if len(head) != 2:
        raise ParseError(f"{path}: line 1: expected 'n_bits n_checks'")
    n_bit, n_chk = head
    if n_bit < 1 or n_chk < 1:
        raise ParseError(f"{path}: line 1: non-positive dimensions")
    if len(ints(1)) != 2:
        raise ParseError(f"{path}: line 2: expected 'max_col_deg max_row_deg'")
    col_deg = ints(2)
    row_deg = ints(3)
    if len(col_deg) != n_bit:
        raise ParseError(f"{path}: line 3: expected {n_bit} column degrees")
    if len(row_deg) != n_chk:
        raise ParseError(f"{path}: line 4: expected {n_chk} row degrees")
    dense = np.zeros((n_chk, n_bit), dtype=np.uint8)
    for c in range(n_bit):
        idx = [t for t in ints(4 + c) if t != 0]
        if len(idx) != col_deg[c]:
            raise ParseError(
                f"{path}: line {5 + c}: column {c + 1} lists {len(idx)} "
                f"checks, declared {col_deg[c]}")
        for r in idx:
            if not 1 <= r <= n_chk:
                raise ParseError(f"{path}: line {5 + c}: check index {r} out of range")
            dense[r - 1, c] = 1
    for r in range(n_chk):
        idx = [t for t in ints(4 + n_bit + r) if t != 0]
        if len(idx) != row_deg[r]:
            raise ParseError(
                f"{path}: line {5 + n_bit + r}: row {r + 1} lists {len(idx)} "
                f"bits, declared {row_deg[r]}")
        for c in idx:
            if not 1 <= c <= n_bit or dense[r, c - 1] != 1:
                raise ParseError(
                    f"{path}: line {5 + n_bit + r}: row/column adjacency "
                    f"lists disagree at ({r + 1}, {c})")
    if int(dense.sum()) != sum(row_deg):
        raise ParseError(f"{path}: degree totals disagree")
    return dense
