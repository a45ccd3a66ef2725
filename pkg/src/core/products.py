import logging
import math
from typing import List, Literal, Optional, Sequence

from pydantic import BaseModel, Field

from src.config.settings import SCHEMA_VERSION
from .constructions import (external_direct_product, internal_direct_product,
                            wreath_product)
from .derangement_graph import (external_identity_holds,
                                internal_identity_holds, zhang_alpha)
from .ekr import EkrAnalyzer, EkrReport
from .exceptions import GroupError, VerificationError
from .group import PermutationGroup
from .solver import SOLVER_VERTEX_CAP

logger = logging.getLogger(__name__)

ProductKind = Literal['external', 'internal', 'wreath']


class ProductReport(BaseModel):
    """Verdicts for a product next to the verdicts of its factors."""

    schema_version: int = SCHEMA_VERSION
    kind: Literal['product'] = 'product'
    product_kind: ProductKind
    label: str = ''
    factors: List[str]
    degree: int
    order: int
    factor_alpha: List[Optional[int]]
    factor_ekr: List[str]
    factor_strict_ekr: List[str]
    alpha: Optional[int] = None
    predicted_alpha: Optional[int] = None
    alpha_law_holds: Optional[bool] = None
    graph_identity_holds: Optional[bool] = None
    ekr: str
    strict_ekr: str
    implication_holds: Optional[bool] = None
    notes: List[str] = Field(default_factory=list)


def _implies(premise: Optional[bool], conclusion: Optional[bool]) -> Optional[bool]:
    if premise is False:
        return True
    if premise is None or conclusion is None:
        return None
    return conclusion


def _verdict_flag(verdict: str) -> Optional[bool]:
    return {'yes': True, 'no': False, 'refuted-by-witness': False}.get(verdict)


def _all_flags(verdicts: Sequence[str]) -> Optional[bool]:
    flags = [_verdict_flag(v) for v in verdicts]
    if False in flags:
        return False
    if None in flags:
        return None
    return True


def predicted_alpha(kind: str, factors: Sequence[PermutationGroup], alphas: Sequence[Optional[int]]) -> Optional[int]:
    """
    Independence number the product theorems give from the factors.

    external: the product of the factor alphas; internal: the direct-product
    maximum over factors; wreath: the largest point stabilizer, valid when
    both factors have the EKR property.
    """
    if kind == 'wreath':
        G, H = factors
        return G.order ** (H.degree - 1) * G.max_stabilizer_size() * H.max_stabilizer_size()
    if any(a is None for a in alphas):
        return None
    if kind == 'external':
        return math.prod(alphas)
    return zhang_alpha(alphas, [G.order for G in factors])


def check_product(kind: str,
                  factors: Sequence[PermutationGroup],
                  analyzer: Optional[EkrAnalyzer] = None,
                  label: str = '',
                  element_cap: Optional[int] = None) -> ProductReport:
    """
    Build a product, run the verdicts on it and on its factors, and check
    the laws linking them.

    Args:
        kind: 'external', 'internal' or 'wreath'
        factors: Factor groups (exactly two for wreath)
        analyzer: Verdict engine, a default one when None
        label: Record label
        element_cap: Enumeration cap for the product
    """
    analyzer = analyzer or EkrAnalyzer()
    if kind == 'external':
        product = external_direct_product(factors, element_cap)
    elif kind == 'internal':
        product = internal_direct_product(factors, element_cap)
    elif kind == 'wreath':
        if len(factors) != 2:
            raise GroupError("A wreath product takes two factors")
        product = wreath_product(factors[0], factors[1], element_cap)
    else:
        raise GroupError(f"Unknown product kind {kind!r}")

    factor_reports: List[EkrReport] = [analyzer.analyze(G, G.description) for G in factors]
    report = analyzer.analyze(product, label or product.description)
    alphas = [r.alpha for r in factor_reports]
    notes = []

    predicted = predicted_alpha(kind, factors, alphas)
    if kind == 'wreath':
        if predicted != product.max_stabilizer_size():
            raise VerificationError(f"{product.description}: stabilizer size {product.max_stabilizer_size()} "
                                    f"differs from the product formula {predicted}")
        if _all_flags([r.ekr for r in factor_reports]) is not True:
            notes.append("wreath alpha law applies only when both factors have the EKR property")
            predicted = None
    law = None if predicted is None or report.alpha is None else report.alpha == predicted

    identity = None
    if kind != 'wreath' and product.order <= SOLVER_VERTEX_CAP:
        identity = external_identity_holds(factors) if kind == 'external' else internal_identity_holds(factors)

    factor_ekr = _all_flags([r.ekr for r in factor_reports])
    product_ekr = _verdict_flag(report.ekr)
    if kind == 'external':
        # EKR and strict EKR pass to and from the factors
        factor_strict = _all_flags([r.strict_ekr for r in factor_reports])
        product_strict = _verdict_flag(report.strict_ekr)
        checks = [None if factor_ekr is None or product_ekr is None else factor_ekr == product_ekr]
        if factor_ekr and product_ekr:
            checks.append(None if factor_strict is None or product_strict is None
                          else factor_strict == product_strict)
        implication = None if None in checks else all(checks)
    else:
        implication = _implies(factor_ekr, product_ekr)

    if law is False or identity is False or implication is False:
        logger.warning(f"{product.description}: law={law}, identity={identity}, implication={implication}")

    return ProductReport(
        product_kind=kind,
        label=label or product.description,
        factors=[G.description for G in factors],
        degree=product.degree,
        order=product.order,
        factor_alpha=alphas,
        factor_ekr=[r.ekr for r in factor_reports],
        factor_strict_ekr=[r.strict_ekr for r in factor_reports],
        alpha=report.alpha,
        predicted_alpha=predicted,
        alpha_law_holds=law,
        graph_identity_holds=identity,
        ekr=report.ekr,
        strict_ekr=report.strict_ekr,
        implication_holds=implication,
        notes=notes + report.notes,
    )
