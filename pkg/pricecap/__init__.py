#
# Root of the pricecap module.
# Provides access to all shared functionality (primitives, benchmark, solver,
# taxes, simulation and reference solutions).
#
# This file is part of PRICECAP which is
# released under the BSD 3-clause license. See accompanying LICENSE.md for
# copyright notice and full license details.
#
"""
Pricecap: optimal regulation of a monopolist with private costs.

This module computes the welfare-maximising unit tax for a monopolist whose
marginal cost is privately known, when the regulator may tax but never
subsidise. It tests whether laissez-faire is already optimal, solves for the
optimal mechanism otherwise, converts it into a progressive price cap, and
checks the result against simulated firm behaviour and reference solutions.
"""
from __future__ import absolute_import, division
from __future__ import print_function, unicode_literals
import sys


#
# Version info
#
def _load_version_int():
    try:
        import os
        root = os.path.abspath(os.path.dirname(__file__))
        with open(os.path.join(root, 'version'), 'r') as f:
            version = f.read().strip().split(',')
        major, minor, revision = [int(x) for x in version]
        return major, minor, revision
    except Exception as e:
        raise RuntimeError('Unable to read version number (' + str(e) + ').')


__version_int__ = _load_version_int()
__version__ = '.'.join([str(x) for x in __version_int__])


#
# Expose pricecap version
#
def version(formatted=False):
    """
    Returns the version number, as a 3-part integer (major, minor, revision).
    If ``formatted=True``, it returns a string formatted version (for example
    "Pricecap 1.0.0").
    """
    if formatted:
        return 'Pricecap ' + __version__
    else:
        return __version_int__


#
# Constants
#
# Float format: a float can be converted to a 17 digit decimal and back without
# loss of information
FLOAT_FORMAT = '{: .17e}'

#
# Utility classes and methods
#
from ._util import strfloat, vector, Timer  # noqa
from ._util import golden_section_search, interval_integrals  # noqa
from ._util import tail_integrals  # noqa
from ._logger import Logger, Loggable  # noqa
from ._schedule import Schedule  # noqa

#
# Parallel and sequential evaluation
#
from ._evaluation import (  # noqa
    evaluate,
    Evaluator,
    ParallelEvaluator,
    SequentialEvaluator,
)

#
# Market primitives
#
from ._demand import (  # noqa
    DemandCurve,
    LinearDemand,
    ConstantElasticDemand,
    LogarithmicDemand,
    TabulatedDemand,
    consumer_value,
    price,
    quantity,
)
from ._costs import (  # noqa
    CostDistribution,
    UniformCost,
    TruncatedNormalCost,
    TruncatedExponentialCost,
    TabulatedCost,
)
from ._environment import (  # noqa
    InfeasibleEnvironmentError,
    MarketEnvironment,
    AssumptionReport,
    check_assumptions,
)
from ._config import (  # noqa
    SOLVER_DEFAULTS,
    environment_from_dict,
    environment_to_dict,
    load_environment,
    solver_settings,
)

#
# Laissez-faire benchmark and intervention test
#
from ._laissez_faire import (  # noqa
    monopoly_quantity,
    gross_profit,
    lf_cutoff,
    expected_welfare,
    LaissezFaireSchedule,
    lf_schedule,
    lf_welfare,
)
from ._gate import GateReport, markup_curve, gate  # noqa

#
# Optimal regulation
#
from ._solver import (  # noqa
    NO_BUNCHING,
    STRUCTURE_UNVERIFIED,
    LAISSEZ_FAIRE_FALLBACK,
    LAISSEZ_FAIRE,
    BUNCH,
    TAXED,
    EXCLUDED,
    terminal_quantity,
    phi,
    InnerSolution,
    inner_solve,
    RegulationPolicy,
    MechanismPolicy,
    LaissezFairePolicy,
    mbmc_residual,
    SolveDiagnostics,
    PolicySolver,
    outer_solve,
)

#
# Tax schedules
#
from ._tax import (  # noqa
    TaxSchedule,
    ZeroTax,
    LinearTax,
    TabulatedTax,
    ShiftedTax,
    OptimalTax,
    build_tax,
    regulated_demand,
    ProgressivityReport,
    verify_progressive,
)

#
# Firm simulation
#
from ._firm import (  # noqa
    BestResponse,
    best_response,
    AuditReport,
    ic_audit,
)

#
# Reference solutions
#
from ._oracles import (  # noqa
    ClosedFormLinearUniform,
    closed_form_policy,
    GridMechanism,
    GridMechanismSolver,
    brute_force_mechanism,
    OracleComparison,
    compare_with_oracles,
)

#
# Remove any imported modules, so we don't expose them as part of pricecap
#
del(sys)
