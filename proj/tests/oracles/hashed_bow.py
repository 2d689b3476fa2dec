"""Reference implementation of the deterministic hashed bag-of-tokens embedder.

Written independently of the C++ sources and used only to freeze expected
values into the test fixtures. Rules:

  * lowercase ASCII, tokens are maximal runs of [a-z0-9]
  * no tokens -> the trimmed, lowercased text is the single token
  * FNV-1a 64-bit hash per token, bucket = h % dim, sign = -1 if bit 63 set
  * accumulate counts, then L2-normalize
  * if every bucket cancels to zero, bucket (hash(whole trimmed text) % dim) = 1
"""

import math
import re

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK = (1 << 64) - 1


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV_PRIME) & MASK
    return h


def tokens(text: str):
    lowered = bytes(c + 32 if 65 <= c <= 90 else c for c in text.encode("utf-8"))
    found = re.findall(rb"[a-z0-9]+", lowered)
    if found:
        return found
    stripped = lowered.strip(b" \t\r\n\f\v")
    return [stripped] if stripped else []


def embed(text: str, dim: int = 384):
    if not text.strip(" \t\r\n\f\v"):
        raise ValueError("blank input")
    vec = [0.0] * dim
    for tok in tokens(text):
        h = fnv1a64(tok)
        vec[h % dim] += -1.0 if (h >> 63) & 1 else 1.0
    if all(v == 0.0 for v in vec):
        whole = text.encode("utf-8").strip(b" \t\r\n\f\v")
        whole = bytes(c + 32 if 65 <= c <= 90 else c for c in whole)
        vec[fnv1a64(whole) % dim] = 1.0
    norm = math.sqrt(sum(v * v for v in vec))
    return [v / norm for v in vec]


def cosine(a, b):
    dot = sum(x * y for x, y in zip(a, b))
    na = sum(x * x for x in a)
    nb = sum(y * y for y in b)
    return dot / math.sqrt(na * nb)
