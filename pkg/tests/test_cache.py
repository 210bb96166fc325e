import struct
import zlib
from concurrent.futures import ThreadPoolExecutor

import pytest

from collatz_cover import CacheFormatError, SigmaCache, sigma_infinity


def test_put_get_and_admission():
    cache = SigmaCache(max_key=100)
    cache.put(13, 9)
    assert cache.get(13) == 9
    assert 13 in cache
    cache.put(101, 5)  # at/above the bound: silently skipped
    assert cache.get(101) is None
    assert len(cache) == 1


def test_put_rejects_bad_entries():
    cache = SigmaCache()
    with pytest.raises(ValueError):
        cache.put(4, 2)
    with pytest.raises(ValueError):
        cache.put(0, 0)
    with pytest.raises(ValueError):
        cache.put(13, -1)


def test_roundtrip(tmp_path):
    cache = SigmaCache()
    for d in range(1, 300):
        sigma_infinity(d, cache)
    path = tmp_path / "sigma.bin"
    cache.save(path)
    loaded = SigmaCache.load(path)
    assert loaded.items() == cache.items()


def test_file_layout(tmp_path):
    cache = SigmaCache()
    cache.put(13, 9)
    cache.put(1, 0)
    cache.put(5, 5)
    path = tmp_path / "sigma.bin"
    cache.save(path)
    blob = path.read_bytes()
    # independently re-encode: header, ascending pairs, trailing crc32
    body = struct.pack("<4sBQ", b"CSIG", 1, 3)
    for key, value in [(1, 0), (5, 5), (13, 9)]:
        body += struct.pack("<QQ", key, value)
    assert blob == body + struct.pack("<I", zlib.crc32(body))


def _valid_blob(entries):
    body = struct.pack("<4sBQ", b"CSIG", 1, len(entries))
    for key, value in entries:
        body += struct.pack("<QQ", key, value)
    return body + struct.pack("<I", zlib.crc32(body))


def _write(tmp_path, blob):
    path = tmp_path / "cache.bin"
    path.write_bytes(blob)
    return path


def test_load_rejects_bad_magic(tmp_path):
    blob = bytearray(_valid_blob([(5, 5)]))
    blob[0:4] = b"XSIG"
    body = bytes(blob[:-4])
    path = _write(tmp_path, body + struct.pack("<I", zlib.crc32(body)))
    with pytest.raises(CacheFormatError, match="magic"):
        SigmaCache.load(path)


def test_load_rejects_bad_version(tmp_path):
    blob = bytearray(_valid_blob([(5, 5)]))
    blob[4] = 9
    body = bytes(blob[:-4])
    path = _write(tmp_path, body + struct.pack("<I", zlib.crc32(body)))
    with pytest.raises(CacheFormatError, match="version"):
        SigmaCache.load(path)


def test_load_rejects_truncation(tmp_path):
    blob = _valid_blob([(5, 5), (13, 9)])
    path = _write(tmp_path, blob[:-9])
    with pytest.raises(CacheFormatError):
        SigmaCache.load(path)


def test_load_rejects_trailing_garbage(tmp_path):
    blob = _valid_blob([(5, 5)])
    path = _write(tmp_path, blob + b"\x00")
    with pytest.raises(CacheFormatError):
        SigmaCache.load(path)


def test_load_rejects_corrupted_checksum(tmp_path):
    blob = bytearray(_valid_blob([(5, 5)]))
    blob[-1] ^= 0xFF
    path = _write(tmp_path, bytes(blob))
    with pytest.raises(CacheFormatError, match="checksum"):
        SigmaCache.load(path)


def test_load_rejects_corrupted_payload(tmp_path):
    blob = bytearray(_valid_blob([(5, 5)]))
    blob[-10] ^= 0x01  # flip a value byte without fixing the crc
    path = _write(tmp_path, bytes(blob))
    with pytest.raises(CacheFormatError, match="checksum"):
        SigmaCache.load(path)


def test_load_rejects_unsorted_keys(tmp_path):
    path = _write(tmp_path, _valid_blob([(13, 9), (5, 5)]))
    with pytest.raises(CacheFormatError, match="increasing"):
        SigmaCache.load(path)


def test_load_rejects_duplicate_keys(tmp_path):
    path = _write(tmp_path, _valid_blob([(5, 5), (5, 5)]))
    with pytest.raises(CacheFormatError, match="increasing"):
        SigmaCache.load(path)


def test_load_rejects_even_keys(tmp_path):
    path = _write(tmp_path, _valid_blob([(4, 2)]))
    with pytest.raises(CacheFormatError, match="even"):
        SigmaCache.load(path)


def test_load_applies_admission_bound(tmp_path):
    big = (1 << 40) + 1
    path = _write(tmp_path, _valid_blob([(5, 5), (big, 7)]))
    loaded = SigmaCache.load(path)  # default bound is 2^32
    assert loaded.get(5) == 5
    assert loaded.get(big) is None
    wide = SigmaCache.load(path, max_key=1 << 50)
    assert wide.get(big) == 7


def test_save_rejects_oversized_values(tmp_path):
    cache = SigmaCache()
    cache.put(5, 1 << 64)
    with pytest.raises(ValueError):
        cache.save(tmp_path / "x.bin")


def test_concurrent_writers_agree():
    cache = SigmaCache()

    def worker(_):
        for d in range(1, 400, 2):
            sigma_infinity(d, cache)
        return len(cache)

    with ThreadPoolExecutor(max_workers=8) as pool:
        list(pool.map(worker, range(8)))
    reference = SigmaCache()
    for d in range(1, 400, 2):
        sigma_infinity(d, reference)
    assert dict(cache.items()) == dict(reference.items())
