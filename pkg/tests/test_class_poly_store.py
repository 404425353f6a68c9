import pytest

from class_poly_store import ClassPolyStore, StoreKey
from errors import ConsistencyError


class TestStoreKey:
    def test_key_order_does_not_matter(self):
        assert StoreKey({"a": 1, "b": 2}) == StoreKey({"b": 2, "a": 1})
        assert StoreKey({"a": 1}).hash != StoreKey({"a": 2}).hash


class TestClassPolyStore:
    def test_round_trip(self, tmp_path):
        store = ClassPolyStore(tmp_path)
        key = store.key("SL3", "id", "s1 s2")
        assert store.get(key) is None
        store.set(key, {"polynomial": "q + 1"})
        assert store.get(key) == {"polynomial": "q + 1"}
        assert (store.hit_count, store.miss_count) == (1, 1)
        assert (tmp_path / f"{key.hash}.src.json").exists()

    def test_cached_computes_once(self, tmp_path):
        store = ClassPolyStore(tmp_path)
        key = store.key("GL2", "id", "t[1,0]", kind="dim")
        calls = []

        def compute():
            calls.append(1)
            return {"dimension": 1}

        assert store.cached(key, compute) == {"dimension": 1}
        assert ClassPolyStore(tmp_path).cached(key, compute) == {"dimension": 1}
        assert len(calls) == 1

    def test_kind_separates_entries(self, tmp_path):
        store = ClassPolyStore(tmp_path)
        assert store.key("SL3", "id", "s1") != store.key("SL3", "id", "s1", kind="dim")

    def test_version_written(self, tmp_path):
        ClassPolyStore(tmp_path)
        assert (tmp_path / ".version").read_text() == ClassPolyStore.VERSION_STRING

    def test_newer_version_rejected(self, tmp_path):
        (tmp_path / ".version").write_text("9.0.0")
        with pytest.raises(ConsistencyError):
            ClassPolyStore(tmp_path)

    def test_malformed_version_rejected(self, tmp_path):
        (tmp_path / ".version").write_text("latest")
        with pytest.raises(ConsistencyError):
            ClassPolyStore(tmp_path)
