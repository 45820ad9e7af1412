"""Smoke test for the Python bindings. Run after `pip install -e crates/python --no-build-isolation`."""

import green_ideals as gi


def main():
    c2 = gi.Group("C2")
    assert (c2.name, c2.order) == ("C2", 2)
    assert c2.subgroup_classes() == ["1", "C2"]

    burnside = gi.Functor("burnside")
    assert burnside.dim(c2) == 2
    assert burnside.format_idempotent(c2, 1) == "[C2/C2] - 1/2 [C2/1]"
    assert burnside.idempotent(c2, 0) == {"1": "1/2"}
    assert burnside.verify_idempotents(gi.Group("S4"))
    assert not burnside.is_mc_group(c2)

    slice_ = gi.Functor("slice")
    assert slice_.dim(c2) == 3
    assert slice_.mc_witnesses(c2) == ["xi_(C2,1)"]
    assert c2.t_slices() == ["(C2,1)"]

    assert gi.bgroups(8) == ["1", "V4", "S3"]
    v4 = gi.Group("V4")
    assert v4.is_b_group()
    assert burnside.dominates(v4, 4, gi.Group("1"), 0)

    poset = burnside.poset(4)
    assert poset["nodes"] == ["1:e_0", "V4:e_4"]
    assert poset["edges"] == [["V4:e_4", "1:e_0"]]
    assert len(burnside.ideals(4)) == 3

    report = slice_.verify(3)
    assert all(not s["failures"] for s in report), report
    shifted = gi.Functor("shifted:C2")
    assert shifted.is_mc_group(c2)

    for bad in (lambda: gi.Group("Z7"), lambda: gi.Functor("nope")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    try:
        burnside.poset(1000)
    except gi.ResourceError:
        pass
    else:
        raise AssertionError("expected ResourceError")
    try:
        burnside.format_idempotent(c2, 5)
    except IndexError:
        pass
    else:
        raise AssertionError("expected IndexError")

    print(f"python smoke test passed ({len(gi.Group.catalog())} catalog groups)")


if __name__ == "__main__":
    main()
