"""Input checks shared by the estimators."""
from __future__ import annotations

from .address import TAGS, IOBTag, LabeledSequence, tokenize, validate_iob
from .exceptions import TrainDataError

_TAG_SET = set(TAGS)


def check_texts(X) -> list[str]:
    """Normalize ``X`` to a list of address strings.

    Each sample may be a string or a sequence of tokens.
    """
    if isinstance(X, str):
        raise TypeError("expected a sequence of address strings, got a single string")
    out = []
    for sample in X:
        out.append(sample if isinstance(sample, str) else " ".join(sample))
    return out


def check_token_sequences(X) -> list[list[str]]:
    if isinstance(X, str):
        raise TypeError("expected a sequence of samples, got a single string")
    out = []
    for sample in X:
        tokens = tokenize(sample) if isinstance(sample, str) else list(sample)
        if not tokens or any(not isinstance(t, str) or not t for t in tokens):
            raise ValueError("every sample needs at least one non-empty token")
        out.append(tokens)
    return out


def check_labeled(X, y=None) -> list[LabeledSequence]:
    """Build validated :class:`LabeledSequence` objects for training.

    ``X`` is either a list of LabeledSequence (``y`` omitted) or token lists
    with ``y`` holding the matching tag lists.
    """
    if y is None:
        seqs = list(X)
        if not all(isinstance(s, LabeledSequence) for s in seqs):
            raise TypeError("y is required unless X holds LabeledSequence objects")
    else:
        tokens = check_token_sequences(X)
        y = list(y)
        if len(tokens) != len(y):
            raise TrainDataError(f"{len(tokens)} samples but {len(y)} tag sequences")
        seqs = []
        for i, (toks, tags) in enumerate(zip(tokens, y)):
            try:
                seqs.append(LabeledSequence(toks, tags))
            except ValueError as exc:
                raise TrainDataError(str(exc), index=i) from exc
    if not seqs:
        raise TrainDataError("training data is empty")
    for i, seq in enumerate(seqs):
        if not validate_iob(seq):
            raise TrainDataError("gold tags are not IOB-valid", index=i)
        if any(t not in _TAG_SET for t in seq.tags):
            raise TrainDataError("unknown tag", index=i)
    return seqs


def as_tag(tag) -> IOBTag:
    return tag if isinstance(tag, IOBTag) else IOBTag.parse(tag)
