import pytest
from hypothesis import given
from hypothesis import strategies as st

from callscout.stream import (
    BinaryImage,
    CodeRegion,
    StreamError,
    extract_instructions,
    load_image,
)

WIDTHS = [8, 16, 24, 32, 40, 64, 80]


def make_stream(data, instruction_length=32, endianness="big", pc_offset=0, inc=1,
                start=0, end=None):
    image = BinaryImage(data=data)
    region = CodeRegion(start, len(data) if end is None else end)
    return extract_instructions(image, region, instruction_length, endianness, pc_offset, inc)


def test_decodes_known_words_both_endianness():
    data = b"\x01\x02\x03\x04\xaa\xbb\xcc\xdd"
    assert make_stream(data, endianness="big").values == (0x01020304, 0xAABBCCDD)
    assert make_stream(data, endianness="little").values == (0x04030201, 0xDDCCBBAA)


def test_addresses_follow_offset_and_stride():
    stream = make_stream(b"\x00" * 8, instruction_length=16, pc_offset=0x200, inc=2)
    assert [stream.address_of(i) for i in range(4)] == [0x200, 0x202, 0x204, 0x206]
    assert stream.instruction(3).address == 0x206


def test_trailing_bytes_dropped_and_counted():
    stream = make_stream(b"\x01\x02\x03\x04\x05\x06", instruction_length=32)
    assert stream.values == (0x01020304,)
    assert stream.dropped_bytes == 2


def test_region_slices_the_image():
    data = bytes(range(16))
    stream = make_stream(data, instruction_length=32, start=4, end=12)
    assert stream.values == (0x04050607, 0x08090A0B)


@given(
    st.integers(0, len(WIDTHS) - 1),
    st.sampled_from(["big", "little"]),
    st.data(),
)
def test_reencoding_reproduces_region_bytes(width_idx, endianness, data):
    width = WIDTHS[width_idx]
    byte_width = width // 8
    words = data.draw(st.lists(st.integers(0, 2**width - 1), min_size=1, max_size=20))
    raw = b"".join(w.to_bytes(byte_width, endianness) for w in words)
    stream = make_stream(raw, instruction_length=width, endianness=endianness)
    assert stream.values == tuple(words)
    assert raw == b"".join(v.to_bytes(byte_width, endianness) for v in stream.values)


@given(st.binary(min_size=4, max_size=64).filter(lambda b: len(b) % 4 == 0))
def test_endianness_duality(raw):
    # Reversing each word's bytes must swap the big/little decodes.
    swapped = b"".join(raw[i : i + 4][::-1] for i in range(0, len(raw), 4))
    big = make_stream(raw, endianness="big").values
    little = make_stream(swapped, endianness="little").values
    assert big == little


def test_index_of_address_inverts_address_of():
    stream = make_stream(b"\x00" * 12, instruction_length=16, pc_offset=0x100, inc=4)
    for i in range(len(stream)):
        assert stream.index_of_address(stream.address_of(i)) == i
    assert stream.index_of_address(0x101) is None  # off-stride
    assert stream.index_of_address(0xFF) is None  # below base
    assert stream.index_of_address(0x100 + 4 * len(stream)) is None  # past end


def test_empty_image_rejected():
    with pytest.raises(StreamError, match="empty image"):
        BinaryImage(data=b"")


def test_missing_file_rejected(tmp_path):
    with pytest.raises(StreamError, match="no such file"):
        load_image(str(tmp_path / "nope.bin"))


def test_load_image_reads_bytes(tmp_path):
    path = tmp_path / "x.bin"
    path.write_bytes(b"\x01\x02")
    image = load_image(str(path))
    assert image.data == b"\x01\x02"
    assert image.path == str(path)


@pytest.mark.parametrize(
    "kwargs,match",
    [
        (dict(instruction_length=12), "multiple of 8"),
        (dict(instruction_length=0), "multiple of 8"),
        (dict(endianness="middle"), "endianness"),
        (dict(inc=0), "pcIncPerInstr"),
        (dict(pc_offset=-1), "pcOffset"),
        (dict(end=100), "exceeds"),
        (dict(instruction_length=64, end=4), "smaller than one"),
    ],
)
def test_invalid_extraction_parameters(kwargs, match):
    with pytest.raises(StreamError, match=match):
        make_stream(b"\x00" * 8, **kwargs)


def test_invalid_region_bounds():
    with pytest.raises(StreamError, match="invalid code region"):
        CodeRegion(4, 4)
    with pytest.raises(StreamError, match="invalid code region"):
        CodeRegion(-1, 4)


def test_address_overflow_rejected():
    with pytest.raises(StreamError, match="overflow"):
        make_stream(b"\x00" * 8, instruction_length=16, pc_offset=2**64 - 2, inc=2)
