"""Smoke test for the octree_bg_py extension module.

Build and install first:

    pip install maturin
    maturin develop -m crates/py/Cargo.toml   # or: maturin build ... && pip install <wheel>

then run ``python python/smoke_test.py``.
"""

import octree_bg_py as ob


def test_octree():
    assert ob.child_index((255, 0, 0), 7) == 4
    assert ob.quantize_color((200, 100, 50), 4) == (192, 96, 48)

    tree = ob.Octree(4)
    assert not tree.contains((0, 0, 0))
    tree.store((200, 100, 50))
    assert (207, 111, 63) in tree
    assert (64, 100, 50) not in tree
    assert tree.leaf_colors() == [(192, 96, 48)]
    assert tree.node_count() == 5
    assert tree.prune(2).leaf_colors() == [(192, 64, 0)]
    assert ob.Octree.from_bytes(tree.to_bytes(), 4) == tree


def test_merge():
    c, other = (10, 200, 30), (250, 5, 5)
    a, b, d = ob.Octree(3), ob.Octree(3), ob.Octree(3)
    a.store(c)
    b.store(c)
    d.store(other)
    assert c in ob.merge_trees([a, b, d], 0.5, 3)
    assert c not in ob.merge_trees([a, b, d], 0.7, 3)


def test_model_and_eval():
    gray = ob.Frame.filled(20, 10, (128, 128, 128))
    model = ob.BackgroundModel.train([gray] * 10, levels=4, threshold=0.5, grid=(1, 2))
    assert model.grid == (1, 2)
    assert model.frame_dims == (20, 10)

    probe = ob.Frame.filled(20, 10, (128, 128, 128))
    probe.set(3, 4, (0, 0, 0))
    mask = model.detect(probe)
    assert mask.foreground_count() == 1
    assert mask.is_foreground(3, 4)
    assert ob.Mask.from_pgm(mask.to_pgm()) == mask

    restored = ob.BackgroundModel.from_bytes(model.to_bytes())
    assert restored.detect(probe) == mask
    assert model.to_bytes()[:4] == b"OBGM"

    truth = ob.Mask(20, 10, [i == 4 * 20 + 3 for i in range(200)])
    stats = ob.EvalStats()
    stats.accumulate(mask, truth)
    assert stats.scores() == (1.0, 1.0, 1.0)

    worked = ob.EvalStats(true_neg=90, false_neg=10)
    p0, r0, f0 = ob.f0_score(worked)
    assert abs(f0 - 0.947368) < 1e-6
    report = ob.emit_report([("octree", "worked", worked)])
    assert report.splitlines()[1] == "octree,worked,90,0,10,0,0.900000,1.000000,0.947368"
    assert ob.EvalStats(false_pos=5).scores()[2] is None


def test_baselines_and_synthetic():
    frames, truth = ob.generate_synthetic("moving_box", 40, 30, 8, seed=1)
    assert len(frames) == 8 and truth[0].foreground_count() == 100
    assert ob.detect_frame_diff(frames[0], frames[0], 30).foreground_count() == 0

    avg = ob.RunningAverage()
    assert avg.apply(frames[0]).foreground_count() == 0
    assert avg.frames_seen == 1

    ppm = frames[0].to_ppm()
    assert ob.Frame.from_ppm(ppm).to_bytes() == frames[0].to_bytes()
    try:
        ob.Frame.from_ppm(b"P6\n1 1\n65535\n\0\0\0\0\0\0")
    except ValueError as e:
        assert "unsupported maxval" in str(e)
    else:
        raise AssertionError("wide maxval accepted")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok {name}")
