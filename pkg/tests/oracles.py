"""Independent reference implementations the tests check the package against.

Everything here is written the dumb, obvious way (character walks, dense
matrices, full sorts) and stays independent of the code paths it validates.
"""

from __future__ import annotations

import numpy as np

from ctxscope.projector import projection_row


def reference_tokenize(text: str, stopwords) -> list[str]:
    """Character-walk tokenizer: lowercase, split on non-alphanumerics,
    drop stop words and 1-char tokens, then pair adjacent survivors."""
    words = []
    current = []
    for ch in text.lower() + " ":
        if ch.isalnum() and ch != "_":
            current.append(ch)
        else:
            if current:
                words.append("".join(current))
                current = []
    kept = [w for w in words if len(w) > 1 and w not in stopwords]
    pairs = []
    for i in range(len(kept) - 1):
        pairs.append(kept[i] + " " + kept[i + 1])
    return kept + pairs


def dense_projection(config, profiles: dict, vocab_size: int) -> dict:
    """Materialize the full count matrix C and sign matrix R, multiply densely.

    profiles: entity -> {term_index: count}. Returns entity -> int64 vector.
    """
    R = np.stack(
        [projection_row(config, t).astype(np.int64) for t in range(vocab_size)]
    )
    out = {}
    for entity, prof in profiles.items():
        c = np.zeros(vocab_size, dtype=np.int64)
        for t, cnt in prof.items():
            c[t] = cnt
        out[entity] = c @ R
    return out


def reference_cosine(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))


def brute_force_top_k(index, qvec: np.ndarray, k: int, kinds=None) -> list:
    """Full scan: per-row float64 dot, full sort by (-similarity, row)."""
    q = np.asarray(qvec, dtype=np.float64)
    qn = np.linalg.norm(q)
    hits = []
    for i in range(len(index.entities)):
        if not index.active[i]:
            continue
        if kinds is not None and index.entities[i].kind not in kinds:
            continue
        s = np.dot(index.matrix[i].astype(np.float64), q)
        s /= float(index.norms[i]) * qn
        s = min(1.0, max(-1.0, float(s)))
        hits.append((s, i))
    hits.sort(key=lambda t: (-t[0], t[1]))
    return hits[:k]


def procrustes_residual(reference: np.ndarray, candidate: np.ndarray) -> float:
    """Relative residual after optimally rotating/reflecting/translating
    candidate onto reference (no scaling)."""
    X = np.asarray(reference, dtype=np.float64)
    Y = np.asarray(candidate, dtype=np.float64)
    Xc = X - X.mean(axis=0)
    Yc = Y - Y.mean(axis=0)
    U, _, Vt = np.linalg.svd(Yc.T @ Xc)
    aligned = Yc @ (U @ Vt)
    denom = np.sqrt((Xc**2).sum())
    if denom == 0:
        return float(np.sqrt(((aligned - Xc) ** 2).sum()))
    return float(np.sqrt(((aligned - Xc) ** 2).sum()) / denom)


def check_dot_graph(text: str) -> None:
    """Minimal DOT grammar check for undirected graphs.

    Accepts: graph NAME? { stmt* } where stmt is a node or edge statement
    with optional [attr=value ...] lists, terminated by ';'. Raises
    AssertionError on anything it cannot parse.
    """
    tokens = _dot_lex(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        assert pos < len(tokens), f"unexpected end of input (wanted {expected})"
        tok = tokens[pos]
        if expected is not None:
            assert tok == expected, f"expected {expected!r}, got {tok!r} at {pos}"
        pos += 1
        return tok

    take("graph")
    if peek() not in ("{",):
        take()  # optional graph name
    take("{")
    while peek() != "}":
        _dot_statement(take, peek)
    take("}")
    assert pos == len(tokens), f"trailing tokens after graph body: {tokens[pos:]}"


def _dot_statement(take, peek):
    take()  # node id (quoted or bare)
    if peek() == "--":
        take("--")
        take()  # target id
    if peek() == "[":
        take("[")
        while peek() != "]":
            take()  # attr name
            take("=")
            take()  # attr value
        take("]")
    take(";")


def _dot_lex(text: str) -> list[str]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == '"':
            j = i + 1
            buf = []
            while j < len(text) and text[j] != '"':
                if text[j] == "\\":
                    j += 1
                buf.append(text[j])
                j += 1
            assert j < len(text), "unterminated string"
            tokens.append('"' + "".join(buf) + '"')
            i = j + 1
        elif text.startswith("--", i):
            tokens.append("--")
            i += 2
        elif ch in "{}[];=":
            tokens.append(ch)
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in '{}[];="':
                if text.startswith("--", j):
                    break
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens
