import pytest
from hypothesis import given
from hypothesis import strategies as st

from rtprepair.header import (
    FIELDS,
    HEADER_BITS,
    FieldClass,
    HeaderLengthError,
    RtpHeader,
    field_class,
    parse,
    serialize,
)

from conftest import headers


def bit_layout(h):
    """Reference encoder: concatenate fixed-width binary strings in wire order."""
    bits = "".join(format(int(getattr(h, name)), f"0{width}b") for name, (width, _) in FIELDS.items())
    assert len(bits) == 96
    return int(bits, 2).to_bytes(12, "big")


def test_minimal_v2_header():
    assert serialize(RtpHeader()) == bytes.fromhex("80" + "00" * 11)


def test_saturated_fields():
    h = RtpHeader(payload_type=0x7F, sequence_number=0xFFFF, timestamp=0xFFFFFFFF, ssrc=0xFFFFFFFF)
    assert serialize(h) == bytes.fromhex("807FFFFFFFFFFFFFFFFFFFFF")


def test_parse_minimal():
    assert parse(bytes.fromhex("80" + "00" * 11)) == RtpHeader()


def test_parse_all_ones():
    h = parse(b"\xff" * 12)
    assert h == RtpHeader(
        version=3, padding=True, extension=True, csrc_count=15, marker=True,
        payload_type=0x7F, sequence_number=0xFFFF, timestamp=0xFFFFFFFF, ssrc=0xFFFFFFFF,
    )


def test_parse_too_short():
    with pytest.raises(HeaderLengthError):
        parse(b"\x80" * 11)


def test_parse_ignores_trailing_payload():
    h = RtpHeader(sequence_number=7, ssrc=99)
    assert parse(serialize(h) + b"payload") == h


@given(headers)
def test_serialize_matches_reference_layout(h):
    assert serialize(h) == bit_layout(h)


@given(headers)
def test_roundtrip(h):
    out = serialize(h)
    assert len(out) == 12
    assert parse(out) == h


@given(st.binary(min_size=12, max_size=12))
def test_any_96_bits_roundtrip(data):
    assert serialize(parse(data)) == data


@pytest.mark.parametrize("name, value", [("version", 4), ("csrc_count", 16), ("payload_type", 128),
                                         ("sequence_number", 1 << 16), ("ssrc", -1)])
def test_field_width_enforced(name, value):
    with pytest.raises(ValueError):
        RtpHeader(**{name: value})


def test_flags_accept_ints():
    assert RtpHeader(marker=1).marker is True
    with pytest.raises(ValueError):
        RtpHeader(padding=2)


@pytest.mark.parametrize("name, expected", [
    ("sequence_number", FieldClass.PREDICTABLY_DYNAMIC),
    ("timestamp", FieldClass.PREDICTABLY_DYNAMIC),
    ("version", FieldClass.STATIC),
    ("payload_type", FieldClass.STATIC),
    ("ssrc", FieldClass.STATIC),
    ("marker", FieldClass.UNPREDICTABLY_DYNAMIC),
    ("padding", FieldClass.UNPREDICTABLY_DYNAMIC),
    ("extension", FieldClass.UNPREDICTABLY_DYNAMIC),
    ("csrc_count", FieldClass.UNPREDICTABLY_DYNAMIC),
])
def test_field_class(name, expected):
    assert field_class(name) is expected


def test_unknown_field():
    with pytest.raises(ValueError):
        field_class("csrc")


def test_seven_unpredictable_bits():
    widths = {cls: 0 for cls in FieldClass}
    for width, cls in FIELDS.values():
        widths[cls] += width
    assert widths[FieldClass.UNPREDICTABLY_DYNAMIC] == 7
    assert sum(widths.values()) == HEADER_BITS
