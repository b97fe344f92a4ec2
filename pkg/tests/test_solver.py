import pytest

from conftest import cycle3_net, scale_stn, two_var_net
from stnac import (
    AcClosure,
    AcInconsistent,
    EMPTY,
    NegativeCycle,
    Stn,
    ValidationError,
    enforce_ac,
    extract_bound_solution,
    interval,
    is_arc_consistent,
    oracle_minimal_domains,
    sample_solution,
    verify_assignment,
)
from stnac.workloads import gen_random_stn


class TestEnforceAc:
    def test_two_var_closure_equals_minimal_domains(self):
        net = two_var_net()
        # independent route first: shortest paths give the minimal domains
        oracle = oracle_minimal_domains(net)
        assert oracle == [interval(0, 8), interval(2, 10)]
        out = enforce_ac(net)
        assert isinstance(out, AcClosure)
        assert list(out.domains) == oracle

    def test_positive_cycle_is_inconsistent(self):
        net = cycle3_net()
        assert isinstance(oracle_minimal_domains(net), NegativeCycle)
        out = enforce_ac(net)
        assert isinstance(out, AcInconsistent)

    def test_isolated_variable(self):
        net = Stn(1)
        net.set_domain(0, interval(3, 7))
        out = enforce_ac(net)
        assert isinstance(out, AcClosure)
        assert out.domains == (interval(3, 7),)
        assert out.iterations == 1
        assert out.checks == 0
        assert out.domain_updates == 1

    def test_empty_network(self):
        out = enforce_ac(Stn(0))
        assert isinstance(out, AcClosure)
        assert out.domains == ()

    def test_empty_constraint_reports_witness(self):
        net = Stn(2)
        net.set_domain(0, interval(0, 5))
        net.set_domain(1, interval(0, 5))
        net.add_constraint(0, 1, EMPTY)
        out = enforce_ac(net)
        assert isinstance(out, AcInconsistent)
        assert out.witness == 0

    def test_weak_cycle_hits_the_sweep_cap(self):
        # total cycle weight -1 per lap with huge domains: no domain can empty
        # within the budget, so inconsistency comes from the cap
        net = Stn(3)
        for v in range(3):
            net.set_domain(v, interval(0, 10**6))
        net.add_constraint(0, 1, interval(0, 0))
        net.add_constraint(1, 2, interval(0, 0))
        net.add_constraint(2, 0, interval(1, 1))
        assert isinstance(oracle_minimal_domains(net), NegativeCycle)
        out = enforce_ac(net)
        assert isinstance(out, AcInconsistent)
        assert out.cap_exhausted
        assert out.iterations == net.n + 1

    def test_iteration_cap_bound(self):
        for seed in range(30):
            net = gen_random_stn(n=12, density=0.3, wmin=-9, wmax=9, horizon=50, seed=seed)
            out = enforce_ac(net)
            assert out.iterations <= net.n + 1

    def test_determinism(self):
        net = gen_random_stn(n=20, density=0.3, wmin=-9, wmax=9, horizon=100, seed=3)
        a = enforce_ac(net)
        b = enforce_ac(net)
        assert a == b

    def test_monotone_and_idempotent(self):
        for seed in range(20):
            net = gen_random_stn(n=15, density=0.25, wmin=-5, wmax=12, horizon=80, seed=seed)
            out = enforce_ac(net)
            if not isinstance(out, AcClosure):
                continue
            for v in range(net.n):
                assert out.domains[v].issubset(net.domain(v))
            again = enforce_ac(net, domains=list(out.domains))
            assert isinstance(again, AcClosure)
            assert again.domains == out.domains
            assert again.iterations == 1

    def test_check_count_bound(self):
        for seed in range(20):
            net = gen_random_stn(n=18, density=0.4, wmin=-8, wmax=8, horizon=90, seed=seed)
            out = enforce_ac(net)
            assert out.checks <= 2 * (net.e + net.n) * (net.n + 1)

    def test_domain_override(self):
        net = two_var_net()
        out = enforce_ac(net, domains=[interval(8, 8), interval(0, 10)])
        assert isinstance(out, AcClosure)
        assert out.domains == (interval(8, 8), interval(10, 10))


class TestIsArcConsistent:
    def test_closure_is_arc_consistent(self):
        net = two_var_net()
        out = enforce_ac(net)
        ok, violation = is_arc_consistent(net, domains=list(out.domains))
        assert ok and violation is None

    def test_raw_instance_is_not(self):
        ok, violation = is_arc_consistent(two_var_net())
        assert not ok
        assert violation == (0, 1)

    def test_vacuous_without_constraints(self):
        net = Stn(2)
        net.set_domain(0, interval(0, 1))
        net.set_domain(1, interval(5, 9))
        assert is_arc_consistent(net) == (True, None)

    def test_empty_domain_fails_its_zero_edge(self):
        net = Stn(2)
        net.set_domain(0, interval(0, 1))
        net.set_domain(1, interval(5, 9))
        ok, violation = is_arc_consistent(net, domains=[EMPTY, interval(5, 9)])
        assert not ok
        assert violation == (0, 0)

    def test_random_closures_pass(self):
        for seed in range(25):
            net = gen_random_stn(n=14, density=0.3, wmin=-6, wmax=10, horizon=60, seed=seed)
            out = enforce_ac(net)
            if isinstance(out, AcClosure):
                assert is_arc_consistent(net, domains=list(out.domains))[0]


class TestSolutions:
    def test_bound_solutions(self):
        net = two_var_net()
        out = enforce_ac(net)
        lower = extract_bound_solution(out, "lower")
        upper = extract_bound_solution(out, "upper")
        assert lower == [0, 2]
        assert upper == [8, 10]
        assert verify_assignment(net, lower) == (True, None)
        assert verify_assignment(net, upper) == (True, None)

    def test_singleton_closure(self):
        net = Stn(1)
        net.set_domain(0, interval(5, 5))
        out = enforce_ac(net)
        assert extract_bound_solution(out, "lower") == [5]
        assert extract_bound_solution(out, "upper") == [5]

    def test_rejects_inconsistent(self):
        out = enforce_ac(cycle3_net())
        with pytest.raises(ValidationError):
            extract_bound_solution(out, "lower")

    def test_rejects_bad_side(self):
        out = enforce_ac(two_var_net())
        with pytest.raises(ValidationError):
            extract_bound_solution(out, "middle")

    def test_doubled_midpoint_is_a_solution(self):
        # integer-safe convexity: A+B solves the network with doubled bounds
        for seed in range(20):
            net = gen_random_stn(n=12, density=0.3, wmin=-6, wmax=9, horizon=70, seed=seed)
            out = enforce_ac(net)
            if not isinstance(out, AcClosure):
                continue
            a = extract_bound_solution(out, "lower")
            b = extract_bound_solution(out, "upper")
            doubled = scale_stn(net, 2)
            mid = [x + y for x, y in zip(a, b)]
            assert verify_assignment(doubled, [2 * x for x in a]) == (True, None)
            assert verify_assignment(doubled, [2 * x for x in b]) == (True, None)
            assert verify_assignment(doubled, mid) == (True, None)


class TestSampleSolution:
    def test_forced_upper_pick(self):
        net = two_var_net()
        out = enforce_ac(net)
        for seed in range(200):
            sample = sample_solution(net, out, seed)
            if sample[0] == 8:
                assert sample == [8, 10]
                break
        else:
            raise AssertionError("no seed picked x = 8 in 200 tries")

    def test_singleton_is_unique(self):
        net = Stn(1)
        net.set_domain(0, interval(4, 4))
        out = enforce_ac(net)
        assert sample_solution(net, out, 123) == [4]

    def test_thousand_seeds_all_verify(self):
        net = gen_random_stn(n=10, density=0.35, wmin=-5, wmax=9, horizon=60, seed=4, consistent=True)
        out = enforce_ac(net)
        assert isinstance(out, AcClosure)
        for seed in range(1000):
            sample = sample_solution(net, out, seed)
            assert verify_assignment(net, sample) == (True, None)

    def test_deterministic_per_seed(self):
        net = gen_random_stn(n=10, density=0.35, wmin=-5, wmax=9, horizon=60, seed=4, consistent=True)
        out = enforce_ac(net)
        assert sample_solution(net, out, 9) == sample_solution(net, out, 9)


class TestVerifyAssignment:
    def test_accepts_valid(self):
        assert verify_assignment(two_var_net(), [0, 2]) == (True, None)

    def test_rejects_constraint_violation(self):
        ok, violation = verify_assignment(two_var_net(), [0, 9])
        assert not ok
        assert violation == ("constraint", 0, 1)

    def test_rejects_domain_violation(self):
        ok, violation = verify_assignment(two_var_net(), [-1, 2])
        assert not ok
        assert violation == ("domain", 0)

    def test_empty_network(self):
        assert verify_assignment(Stn(0), []) == (True, None)

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            verify_assignment(two_var_net(), [1])
