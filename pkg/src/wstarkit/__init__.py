"""Finite-dimensional W*-algebra toolkit.

Block matrix algebras with float and exact Gaussian-rational backends, the
groupoid of partial isometries over the projection lattice, inverse
semigroups generated inside the algebra, standard representation fibers,
chart atlases on the lattice and the groupoid, and Lie-Poisson brackets on
the predual.
"""

from .core import (  # noqa: F401
    F64,
    QQI,
    DEFAULT_TOL,
    Element,
    ToleranceConfig,
    ShapeError,
    BackendError,
    UnsupportedBackend,
    DomainError,
    zeros,
    identity,
    matrix_unit,
    algebra_basis,
    embed_block,
    equal,
    dist,
    opnorm,
    trace_norm,
    polar_decompose,
    left_support,
    right_support,
    support,
    rank_vector,
    pinv_positive,
    sqrt_positive,
    is_projection,
    is_partial_isometry,
    is_unitary,
    is_positive,
    is_hermitian,
    is_central,
    to_json_dict,
    from_json_dict,
    dumps,
    loads,
)
from .exact import QI  # noqa: F401
from .groupoid import (  # noqa: F401
    Arrow,
    Functional,
    NotComposable,
    MomentMismatch,
    source,
    target,
    compose,
    groupoid_inverse,
    involution_J,
    inner_action,
    functional_polar,
    functional_supports,
    I_star,
    L_star,
    R_star,
    free_action_check,
    GroupoidStructure,
    element_structure,
    verify_groupoid_axioms,
    ActionElement,
    ActionGroupoid,
)
from .lattice import (  # noqa: F401
    leq,
    complement,
    join,
    meet,
    orbit_invariant,
    orbit_order,
    mvn_equivalent,
)
from .semigroups import (  # noqa: F401
    ClosureResult,
    generate_closure,
    check_inverse_semigroup,
    abelian_dichotomy_check,
    truncated_shift,
    MonogenicForm,
    monogenic_normal_form,
    gluskin_form,
    bicyclic_form,
    evaluate_word,
    properly_infinite_obstruction,
)
from .cuntz import (  # noqa: F401
    CuntzWord,
    cuntz_mul,
    cuntz_star,
    cuntz_dumps,
    cuntz_loads,
    cuntz_axiom_check,
    toeplitz_pair,
)
from .car import (  # noqa: F401
    CarWord,
    car_mul,
    car_star,
    car_dumps,
    car_loads,
    car_axiom_check,
    alternative_rules_report,
    jordan_wigner_realize,
)
from .gns import (  # noqa: F401
    State,
    GnsSpace,
    gns_space,
    gns_rep,
    groupoid_rep_phi,
    direct_sum_rep,
    embed_fiber_map,
    commutant_check,
    faithfulness_check,
)
from .atlas import (  # noqa: F401
    ChartDomainError,
    in_chart_domain,
    chart_phi,
    chart_phi_inv,
    lattice_transition,
    groupoid_chart_psi,
    groupoid_chart_psi_inv,
    groupoid_transition,
    involution_derivative_check,
)
from .poisson import (  # noqa: F401
    ScalarField,
    TangentElement,
    CotangentElement,
    lie_poisson_bracket,
    jacobi_defect,
    ad_action,
    ad_star_action,
    lambda_immersion,
    lambda_star_immersion,
    symplectic_form,
)
from .verify import SUITES, run_suite  # noqa: F401

__version__ = "0.1.0"
