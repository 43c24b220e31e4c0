"""Phase-multiset cache: round trips, versioning, corruption, verify."""

import struct

import pytest

from klexact.arith import RationalPhase
from klexact.cache import (
    FORMAT_VERSION,
    MAGIC,
    CacheCorruptError,
    CacheVersionError,
    KloostermanCache,
    cache_get,
    cache_put,
    default_cache_path,
    open_cache,
)
from klexact.multipliers import MultiplierKind, make_spec
from klexact.sums import generalized_S, recompute_terms

PSI = make_spec(MultiplierKind.PSI)


def _sample_key_terms():
    s = generalized_S(1, 0, 2, PSI)
    return ("psi", 1, 0, 2), s.terms


def test_miss_on_empty_cache(tmp_path):
    cache = KloostermanCache(tmp_path / "sums.klex")
    assert cache.get(("eta", 1, 1, 1)) is None
    assert cache.stats().records == 0


def test_round_trip_is_bit_identical(tmp_path):
    cache = KloostermanCache(tmp_path / "sums.klex")
    key, terms = _sample_key_terms()
    cache.put(key, terms)
    again = cache.get(key)
    assert again == terms
    assert all(isinstance(p, RationalPhase) for p in again)
    # a fresh handle reads the same bytes back
    other = KloostermanCache(tmp_path / "sums.klex")
    assert other.get(key) == terms


def test_get_returns_a_copy(tmp_path):
    cache = KloostermanCache(tmp_path / "sums.klex")
    key, terms = _sample_key_terms()
    cache.put(key, terms)
    got = cache.get(key)
    got[RationalPhase(1, 7)] = 99
    assert cache.get(key) == terms


def test_put_accumulates_and_clear_empties(tmp_path):
    cache = KloostermanCache(tmp_path / "sums.klex")
    key, terms = _sample_key_terms()
    cache.put(key, terms)
    cache.put(("eta", 1, -3, 5), generalized_S(1, -3, 5, make_spec(MultiplierKind.ETA)).terms)
    assert cache.stats().records == 2
    assert list(cache.keys()) == [("eta", 1, -3, 5), ("psi", 1, 0, 2)]
    assert cache.clear() == 2
    assert cache.stats().records == 0


def test_version_mismatch_raises(tmp_path):
    path = tmp_path / "sums.klex"
    path.write_bytes(MAGIC + struct.pack("<II", FORMAT_VERSION + 1, 0))
    cache = KloostermanCache(path)
    with pytest.raises(CacheVersionError):
        cache.get(("eta", 1, 1, 1))


def test_corruption_is_warned_and_treated_as_empty(tmp_path, caplog):
    path = tmp_path / "sums.klex"
    cache = KloostermanCache(path)
    key, terms = _sample_key_terms()
    cache.put(key, terms)
    data = path.read_bytes()
    path.write_bytes(data[: len(data) // 2])  # truncate
    fresh = KloostermanCache(path)
    with caplog.at_level("WARNING"):
        assert fresh.get(key) is None
    assert fresh.stats().corrupt
    assert any("corrupt" in rec.message for rec in caplog.records)


def test_verify_passes_on_clean_cache(tmp_path):
    cache = KloostermanCache(tmp_path / "sums.klex")
    key, terms = _sample_key_terms()
    cache.put(key, terms)
    checked, bad = cache.verify(recompute_terms, fraction=1.0)
    assert checked == 1 and bad == []


def test_verify_detects_tampering(tmp_path):
    cache = KloostermanCache(tmp_path / "sums.klex")
    key, terms = _sample_key_terms()
    tampered = dict(terms)
    phase = next(iter(tampered))
    tampered[phase] += 1
    cache.put(key, tampered)
    checked, bad = cache.verify(recompute_terms, fraction=1.0)
    assert checked == 1 and bad == [key]


def test_verify_flags_unknown_idents(tmp_path):
    cache = KloostermanCache(tmp_path / "sums.klex")
    cache.put(("mystery", 0, 0, 1), {RationalPhase(0, 1): 1})
    checked, bad = cache.verify(recompute_terms, fraction=1.0)
    assert bad == [("mystery", 0, 0, 1)]


def test_verify_raises_on_corrupt_file(tmp_path):
    path = tmp_path / "sums.klex"
    path.write_bytes(b"not a cache")
    cache = KloostermanCache(path)
    with pytest.raises(CacheCorruptError):
        cache.verify(recompute_terms)


def test_verify_sample_is_deterministic(tmp_path):
    cache = KloostermanCache(tmp_path / "sums.klex")
    for c in range(1, 30):
        cache.put(("standard", 1, 1, c), {RationalPhase(0, 1): c})
    checked1, bad1 = cache.verify(lambda k: None, fraction=0.1)
    checked2, bad2 = cache.verify(lambda k: None, fraction=0.1)
    assert (checked1, bad1) == (checked2, bad2)
    assert checked1 == 2  # 10% of 29, floored, at least 1


def test_default_path_env_override(tmp_path, monkeypatch):
    target = tmp_path / "alt" / "cache.klex"
    monkeypatch.setenv("KLEXACT_CACHE", str(target))
    assert default_cache_path() == str(target)
    cache = open_cache()
    key, terms = _sample_key_terms()
    cache.put(key, terms)
    assert target.exists()
    assert cache_get(key) == terms


def test_module_level_helpers(tmp_path, monkeypatch):
    monkeypatch.setenv("KLEXACT_CACHE", str(tmp_path / "c.klex"))
    key, terms = _sample_key_terms()
    assert cache_get(key) is None
    cache_put(key, terms)
    assert cache_get(key) == terms
