"""命令行入口

    tsl analyze --problem kl2.json
    tsl check   --problem kl3.json --kmax 2
    tsl basis   --problem kl3.json --lambda all --max-degree 1
    tsl fiber   --problem kl2.json --lambda all --max-degree 2
    tsl global  --problem kl2.json --op sym2 --dmax 2 --domain gm
    tsl cache gc [--purge]

标准输出是 {"manifest": ..., "report": ...}；出错时标准错误输出 ErrorResponse，退出码为错误码。
"""
import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel

from tsl import __version__
from tsl.core.config.logging import configure_logging
from tsl.core.config.settings import Settings, use_settings
from tsl.core.exceptions import TslError
from tsl.schemas.error import ErrorCode, ErrorResponse
from tsl.schemas.manifest import RunManifest
from tsl.schemas.problem import load_problem
from tsl.services.family_service import FamilyService, apply_limits, gc_cache
from tsl.storage.sum_cache import get_sum_cache

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--problem", required=True, help="问题文件（JSON）路径")
    common.add_argument("--kmax", type=int, help="非退化性搜索深度")
    common.add_argument("--ceiling", type=int, help="枚举上限")
    common.add_argument("--search-ceiling", type=int, help="非退化性搜索的环面点数上限")
    common.add_argument("--cache-dir", help="特征和缓存目录，默认 TSL_CACHE_DIR")
    common.add_argument("--json-out", help="报告写入该文件而不是标准输出")

    selector = argparse.ArgumentParser(add_help=False)
    selector.add_argument("--lambda", dest="lam", default="1", help="λ 的取值或 all")
    selector.add_argument("--max-degree", type=int, default=1, help="--lambda all 时闭点的最大次数")

    parser = argparse.ArgumentParser(prog="tsl", description="环面指数和族的几何、基与 L 函数")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="几何数据 D、d、e、N 与胞腔")
    sub.add_parser("check", parents=[common], help="假设 H(i)–H(v)")
    sub.add_parser("basis", parents=[common, selector], help="单项式基与 λ 无关性")
    sub.add_parser("fiber", parents=[common, selector], help="纤维 L 多项式与牛顿多边形")
    glob = sub.add_parser("global", parents=[common], help="截断的整体 L 函数")
    glob.add_argument("--op", help="线性代数运算，如 sym2、ext2、sym1*ext1；默认取问题文件中的 op 或 sym1")
    glob.add_argument("--dmax", type=int, help="截断次数")
    glob.add_argument("--domain", choices=["gm", "a1"], default="gm", help="𝔾_m 或仿射直线")

    cache = sub.add_parser("cache", help="缓存管理")
    cache_sub = cache.add_subparsers(dest="cache_command", required=True)
    gc = cache_sub.add_parser("gc", help="清理损坏或不匹配的缓存条目")
    gc.add_argument("--purge", action="store_true", help="删除全部条目")
    gc.add_argument("--cache-dir", help="缓存目录，默认 TSL_CACHE_DIR")
    return parser


def _run_problem(args: argparse.Namespace, service: FamilyService) -> Tuple[BaseModel, ErrorCode]:
    if args.command == "analyze":
        return service.analyze(), ErrorCode.SUCCESS
    if args.command == "check":
        report = service.check()
        if report.any_failed:
            logger.error("存在未通过的假设")
            return report, ErrorCode.HYPOTHESIS_FAILURE
        return report, ErrorCode.SUCCESS
    if args.command == "basis":
        report = service.basis(args.lam, args.max_degree)
        if not report.independent:
            logger.error("基依赖于 λ 的选取")
            return report, ErrorCode.THEOREM_VIOLATION
        return report, ErrorCode.SUCCESS
    if args.command == "fiber":
        report = service.fiber(args.lam, args.max_degree)
        if not report.all_dominate:
            logger.error("存在低于下界的牛顿多边形")
            return report, ErrorCode.THEOREM_VIOLATION
        if not report.all_consistent:
            logger.error("行列式赋值与基权重不一致，或共轭纤维的和不同")
            return report, ErrorCode.THEOREM_VIOLATION
        return report, ErrorCode.SUCCESS
    return service.global_l(args.op, args.domain, args.dmax), ErrorCode.SUCCESS


def _resolved_arguments(args: argparse.Namespace, limits: Dict[str, Any], config: Settings) -> Dict[str, Any]:
    resolved = dict(limits)
    for key in ("lam", "max_degree", "op", "domain"):
        if hasattr(args, key):
            resolved["lambda" if key == "lam" else key] = getattr(args, key)
    resolved["cache_dir"] = args.cache_dir or config.TSL_CACHE_DIR
    return resolved


def _emit(payload: Dict[str, Any], json_out: Optional[str]) -> None:
    text = json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True)
    if json_out:
        Path(json_out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"报告已写入 {json_out}")
    else:
        sys.stdout.write(text + "\n")


def _emit_error(response: ErrorResponse) -> None:
    sys.stderr.write(json.dumps(response.model_dump(mode="json"), ensure_ascii=False, indent=2) + "\n")


def run(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()

    if args.command == "cache":
        kept, removed = gc_cache(args.cache_dir, purge=args.purge)
        _emit({"report": {"kept": kept, "removed": removed, "purged": args.purge}}, None)
        return int(ErrorCode.SUCCESS)

    problem = load_problem(args.problem)
    raw = Path(args.problem).read_bytes()
    config, limits = apply_limits(
        problem,
        {"ceiling": args.ceiling, "search_ceiling": args.search_ceiling, "k_max": args.kmax, "d_max": getattr(args, "dmax", None)},
    )
    with use_settings(config):
        cache = get_sum_cache(args.cache_dir)
    cache.reset_stats()
    service = FamilyService(problem, cache, config)
    report, code = _run_problem(args, service)

    stats = cache.stats()
    manifest = RunManifest(
        input_hash=hashlib.sha256(raw).hexdigest(),
        library_version=__version__,
        command=args.command,
        resolved=_resolved_arguments(args, limits, config),
        wall_time_seconds=round(time.perf_counter() - started, 3),
        cache_hits=stats["hits"],
        cache_misses=stats["misses"],
    )
    _emit(
        {"manifest": manifest.model_dump(mode="json"), "report": report.model_dump(mode="json")},
        args.json_out,
    )
    return int(code)


def main(argv: Optional[List[str]] = None) -> int:
    """命令行主函数，返回退出码"""
    configure_logging(sys.stderr)
    try:
        return run(argv)
    except TslError as e:
        logger.error(f"{type(e).__name__}: {e.message}")
        _emit_error(e.to_response())
        return int(e.code)
    except (ValueError, ArithmeticError) as e:
        logger.error(f"输入错误: {str(e)}")
        _emit_error(ErrorResponse(code=int(ErrorCode.GENERAL_ERROR), error=type(e).__name__, message=str(e)))
        return int(ErrorCode.GENERAL_ERROR)


if __name__ == "__main__":
    sys.exit(main())
