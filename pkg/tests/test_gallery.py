import pytest

from srgames.gallery import DEFAULT_SEED, GALLERY, Check, GalleryEntry, gallery_ids, get_entry, run_entry
from srgames.interp import Interpretation

TAGS = {"reference", "derived", "trivial"}


def test_ids():
    ids = gallery_ids()
    assert len(ids) == len(set(ids))
    for expected in ("nat-count", "minmax-quant", "pi-st", "tropical-v1", "sigma4-majority", "nonmodel-m1",
                     "nonmodel-m2", "wxy-counting", "random-coherence"):
        assert expected in ids
    with pytest.raises(KeyError):
        get_entry("no-such-entry")


@pytest.mark.parametrize("entry_id", gallery_ids())
def test_entry_checks_pass(entry_id):
    entry = get_entry(entry_id)
    env = entry.interpretations()
    assert env and all(isinstance(pi, Interpretation) for pi in env.values())
    results = run_entry(entry)
    assert results
    for check, ok, detail in results:
        assert check.tag in TAGS
        assert ok, f"{check.name}: {detail}"


def test_random_entry_depends_on_seed():
    a = get_entry("random-coherence", DEFAULT_SEED).interpretations()
    b = get_entry("random-coherence", DEFAULT_SEED).interpretations()
    c = get_entry("random-coherence", DEFAULT_SEED + 1).interpretations()
    assert a == b
    assert a != c


def test_failing_and_raising_checks_reported():
    def boom(env):
        raise RuntimeError("kaput")

    entry = GalleryEntry("t", "test", lambda: {}, [Check("false", "trivial", lambda env: (False, "nope")),
                                                  Check("raises", "trivial", boom)])
    (c1, ok1, d1), (c2, ok2, d2) = run_entry(entry)
    assert not ok1 and d1 == "nope"
    assert not ok2 and "kaput" in d2
