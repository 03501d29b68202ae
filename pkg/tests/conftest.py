import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from ncres.ring import RingContext
from ncres.groebner import FreeModuleMap
from ncres.modules import free_module, make_module, syzygy


def residue_field(ctx):
    """k = R/(x_1..x_r) as an FPModule."""
    vs = [ctx.variable(v) for v in ctx.variables]
    return make_module([0], FreeModuleMap(ctx, (1,) * ctx.nvars, (0,),
                                          [[v] for v in vs]), ctx)


def maximal_ideal(ctx):
    """m = (x_1..x_r) as a module: the first syzygy of k."""
    return syzygy(residue_field(ctx), 1)


def square_quotient(ctx):
    """R/m^2."""
    import itertools
    vs = [ctx.variable(v) for v in ctx.variables]
    cols = [[a * b] for a, b in
            itertools.combinations_with_replacement(vs, 2)]
    degs = (2,) * len(cols)
    return make_module([0], FreeModuleMap(ctx, degs, (0,), cols), ctx)


def module_family(ctx):
    """Named test modules over ctx; all finitely presented and graded."""
    fam = {"R": free_module(ctx), "k": residue_field(ctx),
           "m": maximal_ideal(ctx), "R/m2": square_quotient(ctx)}
    if ctx.nvars >= 2:
        fam["omega2"] = syzygy(residue_field(ctx), 2)
    return fam


@pytest.fixture(scope="session")
def ctx1():
    return RingContext(101, ("x",))


@pytest.fixture(scope="session")
def ctx2():
    return RingContext(101, ("x", "y"))


@pytest.fixture(scope="session")
def ctx3():
    return RingContext(101, ("x", "y", "z"))


@pytest.fixture(scope="session")
def k2(ctx2):
    return residue_field(ctx2)


@pytest.fixture(scope="session")
def k3(ctx3):
    return residue_field(ctx3)
