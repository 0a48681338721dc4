from cubench import axioms, cube
from cubench.axioms import AxiomSettings
from cubench.cube import Variant
from cubench.verdict import Status


def test_all_axioms_hold(variant):
    lines = axioms.run_axioms(AxiomSettings(level=2, variant=variant))
    assert len(lines) == 10
    assert [line.status for line in lines] == [Status.PASS] * 10, [line.render() for line in lines]


def test_axiom_names_are_stable():
    names = [line.name for line in axioms.run_axioms(AxiomSettings(level=1))]
    assert names[0] == "ax1.distinct_endpoints"
    assert names[-1] == "ax10.iso_extension"


def test_corrupted_min_fails_only_its_axiom():
    broken = cube.corrupt(cube.mu(0), 3)
    lines = axioms.run_axioms(AxiomSettings(level=2, variant=Variant.B_ORD, mu0=broken))
    failed = [line.name for line in lines if line.status is Status.FAIL]
    assert failed == ["ax2.connection_min"]
    first = dict(lines[1].details)["first"]
    assert first.startswith("min")
