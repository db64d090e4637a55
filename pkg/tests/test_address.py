import pytest
from hypothesis import given, strategies as st

from addrbench.address import (
    COMPONENTS, OUTSIDE, TAGS, AddressRecord, ComponentLabel as C, IOBTag, LabeledSequence,
    components_from_labels, extract_chunks, gold_labels, record_from_labels, render, tokenize,
    validate_iob,
)
from addrbench.exceptions import EmptyInput, EmptyRecord, InvalidRecord

LUKE = AddressRecord("118", None, "LUKE HICKS", "RD", None, "HAZEL GREEN", "AL", "35750")


def test_component_order():
    assert len(COMPONENTS) == 8
    assert sorted(reversed(COMPONENTS)) == list(COMPONENTS)
    assert C.HOUSE_NUMBER < C.PREDIRECTIONAL < C.STREET_NAME < C.ROAD_TYPE
    assert C.POSTDIRECTIONAL < C.CITY < C.STATE < C.POSTAL_CODE


def test_tag_inventory():
    assert len(TAGS) == 17
    assert TAGS[0] == IOBTag("B", C.HOUSE_NUMBER)
    assert TAGS[-1] == OUTSIDE
    assert all(IOBTag.parse(str(t)) == t for t in TAGS)


@pytest.mark.parametrize("prefix,label", [("O", C.CITY), ("B", None), ("X", C.CITY)])
def test_bad_tags(prefix, label):
    with pytest.raises(ValueError):
        IOBTag(prefix, label)


def test_render_examples():
    rec = AddressRecord("467", "W", "BROOKWOOD", "CIR", None, "OZARK", "AL", "36360")
    assert render(rec) == "467 W BROOKWOOD CIR OZARK AL 36360"
    assert render(AddressRecord(street_name="MAIN", road_type="ST")) == "MAIN ST"
    assert render(LUKE) == "118 LUKE HICKS RD HAZEL GREEN AL 35750"


def test_render_empty():
    with pytest.raises(EmptyRecord):
        render(AddressRecord())
    with pytest.raises(EmptyRecord):
        gold_labels(AddressRecord())


def test_gold_labels_examples():
    assert gold_labels(LUKE).tag_strings == [
        "B-HOUSENUMBER", "B-STREETBASENAME", "I-STREETBASENAME", "B-ROADTYPE",
        "B-CITY", "I-CITY", "B-STATE", "B-POSTALCODE",
    ]
    seq = gold_labels(AddressRecord(city="Los Angeles"))
    assert seq.tokens == ("Los", "Angeles")
    assert seq.tag_strings == ["B-CITY", "I-CITY"]
    assert gold_labels(AddressRecord(street_name="MAIN", road_type="ST")).tag_strings == [
        "B-STREETBASENAME", "B-ROADTYPE"]


@pytest.mark.parametrize("value", [" MAIN", "MAIN ", "MAIN  ST", "", "A,B", "A\tB"])
def test_record_rejects_bad_values(value):
    with pytest.raises(InvalidRecord):
        AddressRecord(street_name=value)


def test_record_rejects_three_outcomes():
    with pytest.raises(InvalidRecord):
        AddressRecord(street_name="MAIN", outcomes=(1, 2, 3))


def test_ground_truth_needs_street():
    assert LUKE.is_ground_truth
    assert not AddressRecord(city="HOUSTON").is_ground_truth


def test_from_components_treats_empty_as_absent():
    rec = AddressRecord.from_components({"STREETBASENAME": "MAIN", C.CITY: "", "STATE": "TX"})
    assert rec.city is None and rec.street_name == "MAIN" and rec.state == "TX"


@pytest.mark.parametrize("tags,ok", [
    (["B-CITY", "I-CITY"], True),
    (["I-CITY", "B-CITY"], False),
    (["B-CITY", "I-STATE"], False),
    (["O", "I-CITY"], False),
    (["B-CITY", "O", "B-CITY"], True),
])
def test_validate_iob(tags, ok):
    assert validate_iob(tags) is ok


def test_labeled_sequence_checks():
    with pytest.raises(ValueError):
        LabeledSequence([], [])
    with pytest.raises(ValueError):
        LabeledSequence(["a", "b"], ["O"])


def test_tokenize_commas():
    assert tokenize("Houston , TX 77845") == ["Houston", ",", "TX", "77845"]
    assert tokenize("Houston, TX") == ["Houston", ",", "TX"]
    with pytest.raises(EmptyInput):
        tokenize("   ")


def test_extract_chunks():
    assert extract_chunks(["B-CITY", "I-CITY", "B-STATE"]) == [(C.CITY, 0, 2), (C.STATE, 2, 3)]
    assert extract_chunks(["B-CITY", "B-CITY"]) == [(C.CITY, 0, 1), (C.CITY, 1, 2)]
    # a stray I opens its own chunk
    assert extract_chunks(["O", "I-CITY"]) == [(C.CITY, 1, 2)]


word = st.text(alphabet="ABCDEFGHIJ0123456789", min_size=1, max_size=6)
value = st.none() | st.lists(word, min_size=1, max_size=3).map(" ".join)
records = st.builds(
    AddressRecord, value, value, value, value, value, value, value, value
).filter(lambda r: len(r) > 0)


@given(records)
def test_gold_labels_properties(rec):
    seq = gold_labels(rec)
    assert validate_iob(seq)
    assert len(seq) == sum(len(v.split(" ")) for v in rec.components().values())
    assert components_from_labels(seq) == rec.components()
    assert record_from_labels(seq) == rec
    assert seq.text == render(rec)
