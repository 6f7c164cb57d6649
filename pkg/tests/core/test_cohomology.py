"""分次雅可比商的单项式基"""
import logging

import pytest

from tests.test_utils import above, kl2, kl3, line_mu, sheared
from tsl.core.cohomology import compute_basis, graded_jacobian_image, verify_lambda_independence
from tsl.core.config.settings import settings
from tsl.core.exceptions import PreconditionFailed, RankMismatchError
from tsl.core.finite_field import closed_points, make_field
from tsl.core.geometry.laurent import make_family

logger = logging.getLogger(__name__)


def test_kloosterman_two_basis():
    family = kl2()
    basis = compute_basis(family, family.base_field.one())
    assert basis.monomials == [(0,), (-1,)]
    assert basis.weights == [0, 1]
    assert [e.m for e in basis.elements] == [0, 1]

    report = basis.to_schema()
    assert report.rank == report.expected_rank == 2
    assert report.cutoff == "1/1"
    assert [e.weight for e in report.elements] == ["0/1", "1/1"]
    assert [g.dim for g in report.grades] == [1, 2]
    assert [g.image_rank for g in report.grades] == [0, 1]


def test_kloosterman_three_basis():
    family = kl3()
    basis = compute_basis(family, family.base_field.element(2))
    assert basis.rank == 3
    assert basis.weights == [0, 1, 2]
    assert basis.monomials[:2] == [(0, 0), (-1, -1)]


def test_graded_image_columns():
    family = kl2()
    lam = family.base_field.element(2)
    image = graded_jacobian_image(family, lam, 1)
    assert image.rows == [(-1,), (1,)]
    assert image.sources == [(0, (0,))]
    # x∂(x + λ/x) = x − λ/x
    assert [c.code for c in image.columns[0]] == [(-2) % 3, 1]


@pytest.mark.parametrize("factory", [kl2, kl3, line_mu, above, sheared])
def test_rank_equals_normalized_volume(factory):
    family = factory()
    basis = compute_basis(family, family.base_field.one())
    assert basis.rank == family.geometry.N
    for grade in basis.grades:
        assert grade.dim == grade.image_rank + grade.basis_count
    logger.info(f"{factory.__name__}: 基 {basis.monomials}")


def test_lambda_independence():
    family = kl2(5)
    lambdas = [family.base_field.element(c) for c in range(1, 5)]
    independent, report = verify_lambda_independence(family, lambdas)
    assert independent
    assert report.reference == [[0], [-1]]
    assert len(report.bases) == 4


def test_basis_requires_hypotheses():
    family = make_family(make_field(3), [(1, [1, 0]), (1, [0, 1])], [-3, -2])
    with pytest.raises(PreconditionFailed):
        compute_basis(family, family.base_field.one())


def test_rank_mismatch_after_escalation():
    family = kl2()
    settings.BASIS_CUTOFF_ESCALATION = 0
    with pytest.raises(RankMismatchError) as excinfo:
        compute_basis(family, family.base_field.one(), weight_cutoff=0)
    assert excinfo.value.details["rank"] == 1
    assert excinfo.value.details["expected"] == 2


@pytest.mark.parametrize("factory", [kl2, kl3, line_mu, above, sheared])
def test_basis_same_over_extension_points(factory):
    family = factory()
    points = closed_points(family.tower, 2)
    assert len(points) >= 3
    independent, report = verify_lambda_independence(family, [pt.representative for pt in points])
    assert independent
    assert all(b.rank == family.geometry.N for b in report.bases)
