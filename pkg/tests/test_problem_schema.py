"""
问题文件解析与上限配置测试
"""
import json

import pytest

from tests.test_utils import EXAMPLES_DIR, load_example
from tsl.core.config.settings import current_settings, settings, use_settings
from tsl.core.exceptions import ParseError
from tsl.core.parallel_processor import ParallelProcessor
from tsl.schemas.problem import load_problem, parse_problem
from tsl.services.family_service import FamilyService, apply_limits


@pytest.mark.parametrize("path", sorted(EXAMPLES_DIR.glob("*.json")), ids=lambda p: p.stem)
def test_examples_parse(path):
    problem = load_problem(path)
    assert problem.p in (2, 3, 5)
    assert len(problem.f) >= 1


def test_to_family_over_extension():
    family = parse_problem(load_example("kl2_f4")).to_family()
    assert family.base_field.order == 4
    assert family.geometry.N == 2


def test_deformed_example():
    family = parse_problem(load_example("deformed")).to_family()
    assert family.deformation_exponent == 2
    assert family.t_dim == 1


@pytest.mark.parametrize(
    "patch,loc",
    [
        ({"f": []}, "f"),
        ({"f": [{"coeff": 1, "exp": [1, 0]}]}, ""),
        ({"deformation_exponent": 0}, "deformation_exponent"),
        ({"mu": "x"}, "mu"),
    ],
)
def test_invalid_fields(patch, loc):
    data = dict(load_example("kl2"), **patch)
    with pytest.raises(ParseError) as excinfo:
        parse_problem(data)
    assert excinfo.value.details["errors"][0]["loc"] == loc


def test_negative_t_exponent():
    data = load_example("deformed")
    data["lower_order"][0]["t_exp"] = [-1]
    with pytest.raises(ParseError):
        parse_problem(data)


def test_load_problem_errors(tmp_path):
    with pytest.raises(ParseError):
        load_problem(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "p": 3,\n  "f": [\n', encoding="utf-8")
    with pytest.raises(ParseError) as excinfo:
        load_problem(bad)
    assert excinfo.value.details["line"] >= 3


def test_apply_limits_prefers_overrides():
    problem = parse_problem(load_example("kl2"))
    before = settings.model_dump()
    config, resolved = apply_limits(problem, {"k_max": 1, "ceiling": None})
    assert resolved["k_max"] == 1
    assert resolved["d_max"] == 2
    assert config.DEFAULT_KMAX == 1
    assert config.ENUMERATION_CEILING == settings.ENUMERATION_CEILING
    assert resolved["basis_cutoff_escalation"] == config.BASIS_CUTOFF_ESCALATION
    # 全局配置不受影响
    assert settings.model_dump() == before
    with pytest.raises(ParseError):
        apply_limits(problem, {"ceiling": 0})


def test_services_keep_their_own_limits(memory_cache):
    problem = parse_problem(load_example("kl2"))
    tight, _ = apply_limits(problem, {"d_max": 1})
    loose, _ = apply_limits(problem, {"d_max": 3})
    first = FamilyService(problem, memory_cache, tight)
    second = FamilyService(problem, memory_cache, loose)
    assert first.global_l("sym0").global_l.d_max == 1
    assert second.global_l("sym0").global_l.d_max == 3
    assert first.global_l("sym0").global_l.d_max == 1
    assert FamilyService(problem, memory_cache).config is settings
    assert current_settings() is settings


def test_scoped_settings_reach_worker_threads():
    config = settings.model_copy(update={"DEFAULT_DMAX": settings.DEFAULT_DMAX + 5})
    processor = ParallelProcessor(max_workers=4, chunk_size=1)
    with use_settings(config) as active:
        assert active is config
        values = processor.map(lambda _: current_settings().DEFAULT_DMAX, range(8))
    assert values == [config.DEFAULT_DMAX] * 8
    assert current_settings() is settings


def test_select_points(memory_cache):
    service = FamilyService(parse_problem(load_example("kl2_f4")), memory_cache)
    (point,) = service.select_points("0,1")
    assert point.representative.coeffs == (0, 1)
    assert len(service.select_points("all", 1)) == 3
    for selector in ("0", "x", "1,0,1"):
        with pytest.raises(ParseError):
            service.select_points(selector)


def test_problem_json_text():
    text = json.dumps(load_example("kl3"))
    assert parse_problem(text).mu == [-1, -1]
