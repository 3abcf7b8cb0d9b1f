import pytest
from hypothesis import given
from hypothesis import strategies as st

from jaqalc.emitter import emit, parse_output
from jaqalc.errors import OutputFormatError


def test_worked_example_bytes():
    assert emit(["10", "10", "01", "01"]) == b"10\n10\n01\n01\n"


def test_empty_record_empty_bytes():
    assert emit([]) == b""
    assert parse_output(b"") == []


def test_seven_qubit_line():
    assert emit(["0000000"]) == b"0000000\n"


def test_emit_rejects_ragged_lengths():
    with pytest.raises(OutputFormatError):
        emit(["10", "100"])


def test_emit_rejects_non_bits():
    with pytest.raises(OutputFormatError):
        emit(["1x"])


def test_parse_output_direct_inverse():
    assert parse_output(b"10\n01\n") == ["10", "01"]


def test_parse_output_rejects_crlf():
    with pytest.raises(OutputFormatError):
        parse_output(b"10\r\n")


def test_parse_output_rejects_non_bits():
    with pytest.raises(OutputFormatError):
        parse_output(b"12\n")


def test_parse_output_rejects_ragged_lines():
    with pytest.raises(OutputFormatError):
        parse_output(b"10\n1\n")


def test_parse_output_rejects_non_ascii():
    with pytest.raises(OutputFormatError):
        parse_output("01\né\n".encode("utf-8"))


def test_missing_final_newline_warns_but_parses():
    with pytest.warns(UserWarning):
        assert parse_output(b"10\n01") == ["10", "01"]


bitstrings = st.integers(min_value=1, max_value=12).flatmap(
    lambda width: st.lists(st.text(alphabet="01", min_size=width,
                                   max_size=width), max_size=50))


@given(bitstrings)
def test_roundtrip_identity(record):
    assert parse_output(emit(record)) == record
