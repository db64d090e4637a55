"""Averaged structured perceptron tagger with IOB-constrained Viterbi decoding."""
from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .address import TAGS, IOBTag, LabeledSequence, tokenize
from .exceptions import ModelLoadError
from .lexicons import LexiconSet, default_lexicons
from .validation import check_labeled, check_token_sequences

log = logging.getLogger(__name__)

MODEL_MAGIC = "addrbench-tagger"
MODEL_VERSION = 1

TAG_NAMES: tuple[str, ...] = tuple(str(t) for t in TAGS)
N_TAGS = len(TAGS)
START = N_TAGS  # row index of the start state in transition tables


def transition_mask(tags: Sequence[IOBTag] = TAGS) -> np.ndarray:
    """Allowed transitions, shape ``(len(tags) + 1, len(tags))``; the last row
    is the start state. I-X may only follow B-X or I-X."""
    n = len(tags)
    mask = np.ones((n + 1, n), dtype=bool)
    for j, cur in enumerate(tags):
        if cur.prefix != "I":
            continue
        for i, prev in enumerate(tags):
            mask[i, j] = prev.prefix != "O" and prev.label == cur.label
        mask[n, j] = False
    return mask


# --- features --------------------------------------------------------------

def token_shape(token: str) -> str:
    return "".join(
        "d" if ch.isdigit() else "X" if ch.isupper() else "x" if ch.isalpha() else ch
        for ch in token
    )


def extract_features(tokens: Sequence[str], i: int, lex: LexiconSet) -> list[str]:
    tok = tokens[i]
    low = tok.lower()
    feats = [
        "bias=1",
        "w=" + low,
        "shape=" + token_shape(tok),
        "pre2=" + low[:2],
        "pre3=" + low[:3],
        "suf2=" + low[-2:],
        "suf3=" + low[-3:],
        "prev=" + (tokens[i - 1].lower() if i > 0 else "<s>"),
        "next=" + (tokens[i + 1].lower() if i + 1 < len(tokens) else "</s>"),
    ]
    if tok.isdigit():
        feats.append("alldigits=1")
    if any(ch.isdigit() for ch in tok):
        feats.append("hasdigit=1")
    if lex.has_ordinal_suffix(tok):
        feats.append("ordsuffix=1")
    if lex.is_directional(tok):
        feats.append("lex=directional")
    if lex.is_road_type(tok):
        feats.append("lex=road_type")
    if lex.is_state(tok):
        feats.append("lex=state")
    if lex.is_spanish_prefix(tok):
        feats.append("lex=spanish_prefix")
    if i == 0:
        feats.append("first=1")
    if i == len(tokens) - 1:
        feats.append("last=1")
    return feats


def sequence_features(tokens: Sequence[str], lex: LexiconSet) -> list[list[str]]:
    return [extract_features(tokens, i, lex) for i in range(len(tokens))]


# --- model -----------------------------------------------------------------

@dataclass
class TaggerModel:
    features: list[str] = field(default_factory=list)
    emission: np.ndarray = field(default_factory=lambda: np.zeros((0, N_TAGS)))
    transition: np.ndarray = field(default_factory=lambda: np.zeros((N_TAGS + 1, N_TAGS)))
    # unaveraged weights as they stood after the last update
    raw_emission: Optional[np.ndarray] = None
    raw_transition: Optional[np.ndarray] = None
    averaged: bool = True
    tags: tuple = TAG_NAMES
    mask: np.ndarray = field(default_factory=transition_mask)

    def __post_init__(self):
        self.index = {f: i for i, f in enumerate(self.features)}
        # masked transitions can never win, whatever the learned weights are
        self._scores = np.where(self.mask, self.transition, -np.inf)

    def feature_ids(self, tokens: Sequence[str], lex: LexiconSet) -> list[np.ndarray]:
        index = self.index
        return [
            np.fromiter((index[f] for f in feats if f in index), dtype=np.int64)
            for feats in sequence_features(tokens, lex)
        ]

    def emissions(self, ids: list[np.ndarray]) -> np.ndarray:
        return _emissions(self.emission, ids)


def _emissions(weights: np.ndarray, ids: list[np.ndarray]) -> np.ndarray:
    out = np.zeros((len(ids), weights.shape[1]))
    for t, row in enumerate(ids):
        if len(row):
            out[t] = weights[row].sum(axis=0)
    return out


def _viterbi(emissions: np.ndarray, scores: np.ndarray) -> list[int]:
    """Best path given emission scores ``(n, T)`` and transition scores
    ``(T + 1, T)`` with -inf at masked entries. Ties go to the lowest tag
    index."""
    n, n_tags = emissions.shape
    delta = scores[n_tags] + emissions[0]
    back = np.zeros((n, n_tags), dtype=np.int64)
    cols = np.arange(n_tags)
    inner = scores[:n_tags]
    for t in range(1, n):
        cand = delta[:, None] + inner
        best = cand.argmax(axis=0)
        back[t] = best
        delta = cand[best, cols] + emissions[t]
    path = [int(delta.argmax())]
    for t in range(n - 1, 0, -1):
        path.append(int(back[t, path[-1]]))
    return path[::-1]


def path_score(emissions: np.ndarray, scores: np.ndarray, path: Sequence[int]) -> float:
    """Score of one tag path, summed in the same order the decoder uses."""
    n_tags = emissions.shape[1]
    s = scores[n_tags, path[0]] + emissions[0, path[0]]
    for t in range(1, len(path)):
        s = s + scores[path[t - 1], path[t]]
        s = s + emissions[t, path[t]]
    return float(s)


def viterbi(tokens: Sequence[str], model: TaggerModel, lex: LexiconSet) -> LabeledSequence:
    if not tokens:
        raise ValueError("cannot decode an empty token sequence")
    em = model.emissions(model.feature_ids(tokens, lex))
    path = _viterbi(em, model._scores)
    return LabeledSequence(tokens, [model.tags[k] for k in path])


# --- training --------------------------------------------------------------

@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 25
    seed: int = 0
    average: bool = True

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


class _Averager:
    """Perceptron weights plus the running sums needed for averaging.

    The average is taken over the weight snapshots after every training
    instance. An update made while processing instance ``k`` (0-based) is
    present in ``total - k`` of the ``total`` snapshots, so accumulating
    ``k * delta`` lets the average be recovered as ``w - acc / total``.
    """

    def __init__(self, n_features: int):
        self.em = np.zeros((n_features, N_TAGS))
        self.tr = np.zeros((N_TAGS + 1, N_TAGS))
        self.em_acc = np.zeros_like(self.em)
        self.tr_acc = np.zeros_like(self.tr)
        self.seen = 0

    def update(self, ids, gold: list[int], pred: list[int]) -> None:
        k = self.seen
        for t, (g, p) in enumerate(zip(gold, pred)):
            if g != p and len(ids[t]):
                self.em[ids[t], g] += 1
                self.em[ids[t], p] -= 1
                self.em_acc[ids[t], g] += k
                self.em_acc[ids[t], p] -= k
            gp = START if t == 0 else gold[t - 1]
            pp = START if t == 0 else pred[t - 1]
            if (gp, g) != (pp, p):
                self.tr[gp, g] += 1
                self.tr[pp, p] -= 1
                self.tr_acc[gp, g] += k
                self.tr_acc[pp, p] -= k

    def averaged(self):
        if self.seen == 0:
            return self.em.copy(), self.tr.copy()
        return self.em - self.em_acc / self.seen, self.tr - self.tr_acc / self.seen


def _index_features(feature_lists) -> list[str]:
    index: dict[str, int] = {}
    for seq in feature_lists:
        for feats in seq:
            for f in feats:
                if f not in index:
                    index[f] = len(index)
    return list(index)


def train(dataset: Sequence[LabeledSequence], config: TrainConfig = TrainConfig(),
          lex: Optional[LexiconSet] = None,
          on_epoch: Optional[Callable[[int, "TaggerModel", dict], None]] = None,
          history: Optional[list] = None) -> TaggerModel:
    """Train with the averaged structured perceptron.

    ``history`` (if given) receives one ``{"epoch", "updates",
    "token_error_rate"}`` dict per epoch; ``on_epoch`` is called with the
    epoch number, the model as it would be returned at that point, and that
    dict.
    """
    lex = lex or default_lexicons()
    seqs = check_labeled(dataset)
    feats = [sequence_features(s.tokens, lex) for s in seqs]
    features = _index_features(feats)
    index = {f: i for i, f in enumerate(features)}
    ids = [[np.array([index[f] for f in tok], dtype=np.int64) for tok in seq] for seq in feats]
    tag_index = {t: i for i, t in enumerate(TAGS)}
    gold = [[tag_index[t] for t in s.tags] for s in seqs]
    mask = transition_mask()

    acc = _Averager(len(features))
    rng = random.Random(config.seed)
    order = list(range(len(seqs)))
    history = history if history is not None else []

    for epoch in range(1, config.epochs + 1):
        rng.shuffle(order)
        errors = tokens = updates = 0
        for i in order:
            scores = np.where(mask, acc.tr, -np.inf)
            pred = _viterbi(_emissions(acc.em, ids[i]), scores)
            wrong = sum(g != p for g, p in zip(gold[i], pred))
            if wrong:
                acc.update(ids[i], gold[i], pred)
                updates += 1
            errors += wrong
            tokens += len(pred)
            acc.seen += 1
        stats = {"epoch": epoch, "updates": updates, "token_error_rate": errors / tokens}
        history.append(stats)
        log.info("epoch %d: %d updates, token error rate %.5f", epoch, updates, stats["token_error_rate"])
        if on_epoch is not None:
            on_epoch(epoch, _build_model(features, acc, config.average), stats)

    return _build_model(features, acc, config.average)


def _build_model(features, acc: _Averager, average: bool) -> TaggerModel:
    if average:
        em, tr = acc.averaged()
    else:
        em, tr = acc.em.copy(), acc.tr.copy()
    return TaggerModel(
        features=list(features),
        emission=em,
        transition=tr,
        raw_emission=acc.em.copy(),
        raw_transition=acc.tr.copy(),
        averaged=average,
    )


def parse_tagger(text: str, model: TaggerModel, lex: Optional[LexiconSet] = None) -> LabeledSequence:
    return viterbi(tokenize(text), model, lex or default_lexicons())


# --- persistence -----------------------------------------------------------

def _sparse(matrix: np.ndarray) -> list:
    rows, cols = np.nonzero(matrix)
    return [[int(r), int(c), float(matrix[r, c])] for r, c in zip(rows, cols)]


def _dense(entries, shape) -> np.ndarray:
    out = np.zeros(shape)
    for r, c, v in entries:
        out[int(r), int(c)] = float(v)
    return out


def model_to_dict(model: TaggerModel) -> dict:
    out = {
        "magic": MODEL_MAGIC,
        "version": MODEL_VERSION,
        "tags": list(model.tags),
        "averaged": model.averaged,
        "features": list(model.features),
        "mask": model.mask.astype(int).tolist(),
        "emission": _sparse(model.emission),
        "transition": model.transition.tolist(),
    }
    if model.raw_emission is not None:
        out["raw_emission"] = _sparse(model.raw_emission)
        out["raw_transition"] = model.raw_transition.tolist()
    return out


def save_model(model: TaggerModel, path) -> None:
    text = json.dumps(model_to_dict(model), separators=(",", ":"))
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_model(path) -> TaggerModel:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelLoadError(f"cannot read model {path}: {exc}") from exc
    if not isinstance(data, dict) or data.get("magic") != MODEL_MAGIC:
        raise ModelLoadError(f"{path} is not an addrbench tagger model")
    if data.get("version") != MODEL_VERSION:
        raise ModelLoadError(f"unsupported model version {data.get('version')!r}")
    try:
        tags = tuple(data["tags"])
        if tags != TAG_NAMES:
            raise ModelLoadError("model tag inventory does not match this build")
        n_feat = len(data["features"])
        shape = (n_feat, len(tags))
        mask = np.array(data["mask"], dtype=bool)
        transition = np.array(data["transition"], dtype=float)
        if mask.shape != (len(tags) + 1, len(tags)) or transition.shape != mask.shape:
            raise ModelLoadError("transition table has the wrong shape")
        raw_em = raw_tr = None
        if "raw_emission" in data:
            raw_em = _dense(data["raw_emission"], shape)
            raw_tr = np.array(data["raw_transition"], dtype=float)
        return TaggerModel(
            features=list(data["features"]),
            emission=_dense(data["emission"], shape),
            transition=transition,
            raw_emission=raw_em,
            raw_transition=raw_tr,
            averaged=bool(data["averaged"]),
            tags=tags,
            mask=mask,
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ModelLoadError(f"corrupt model file {path}: {exc}") from exc


# --- estimator -------------------------------------------------------------

class PerceptronTagger(BaseEstimator):
    """Sequence tagger with the estimator interface.

    ``X`` holds address strings or token lists, ``y`` the matching IOB tag
    lists (strings such as ``"B-CITY"``).
    """

    def __init__(self, epochs=25, seed=0, average=True, lexicons=None):
        self.epochs = epochs
        self.seed = seed
        self.average = average
        self.lexicons = lexicons

    def _lex(self) -> LexiconSet:
        return self.lexicons if self.lexicons is not None else default_lexicons()

    def fit(self, X, y=None):
        seqs = check_labeled(X, y)
        self.history_ = []
        self.model_ = train(
            seqs, TrainConfig(self.epochs, self.seed, self.average), self._lex(), history=self.history_
        )
        return self

    def parse(self, text: str) -> LabeledSequence:
        check_is_fitted(self, "model_")
        return parse_tagger(text, self.model_, self._lex())

    def predict(self, X) -> list[list[str]]:
        check_is_fitted(self, "model_")
        lex = self._lex()
        return [viterbi(toks, self.model_, lex).tag_strings for toks in check_token_sequences(X)]

    def score(self, X, y) -> float:
        """Micro-averaged chunk F1."""
        from .evaluation import chunk_prf

        gold = check_labeled(X, y)
        pred = [LabeledSequence(g.tokens, p) for g, p in zip(gold, self.predict([g.tokens for g in gold]))]
        return chunk_prf(gold, pred).f1
