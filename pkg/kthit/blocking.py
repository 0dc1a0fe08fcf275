from dataclasses import dataclass

from kthit.decomposition import bed_value
from kthit.errors import CapExceeded
from kthit.graph import treedepth_exact
from kthit.oracle import mmbs_graph

# Clip used when a bound is reported in a table.
REPORT_CEILING = 2**63 - 1


def beta(lam, t, max_bits=1 << 20):
    """
    Tower bound on mmbs: beta(0) = 1 and beta(x) = 2 ** (t * beta(x - 1)).
    """
    value = 1
    for _ in range(lam):
        exponent = t * value
        if exponent > max_bits:
            raise CapExceeded(f"beta({lam}, {t}) has more than {max_bits} bits.")
        value = 1 << exponent
    return value


def capped_beta(lam, t, ceiling):
    """
    min(beta(lam, t), ceiling) without building the tower.
    """
    value = 1
    for _ in range(lam):
        exponent = t * value
        if exponent >= ceiling.bit_length():
            return ceiling
        value = 1 << exponent
    return min(value, ceiling)


def chunk_bound(lam, t):
    return (t - 1) * beta(lam, t)


def capped_chunk_bound(lam, t, ceiling):
    return min((t - 1) * capped_beta(lam, t, ceiling), ceiling)


def kernel_degree(lam, t):
    return (t - 1) * (2 * chunk_bound(lam, t) + 2) ** lam


@dataclass(frozen=True)
class BoundParams:
    lam: int
    t: int
    beta: int
    chunk_bound: int
    kernel_degree: int

    @classmethod
    def build(cls, lam, t):
        return cls(lam, t, beta(lam, t), chunk_bound(lam, t), kernel_degree(lam, t))


def td_mmbs_bound(eta):
    return eta**eta * 2 ** (eta * eta)


def verify_mmbs_bounds(g, t, ground_cap=18):
    """
    Compare mmbs with its bed+ tower bound and its treedepth bound.
    """
    bed = bed_value(g, t, lambda_cap=g.n).value
    td, _ = treedepth_exact(g)
    mmbs = mmbs_graph(g, t, ground_cap=ground_cap)
    beta_clipped = capped_beta(bed, t, REPORT_CEILING)
    td_bound = td_mmbs_bound(td)
    return {
        "n": g.n,
        "m": g.num_edges,
        "bed": bed,
        "td": td,
        "mmbs": mmbs.value,
        "lower_bound": mmbs.lower_bound,
        "beta": beta_clipped,
        "td_bound": td_bound,
        "passed": mmbs.value <= beta_clipped and mmbs.value <= td_bound,
    }
