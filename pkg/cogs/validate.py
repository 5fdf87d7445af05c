# fockop - Validate

from typing import List, Optional

import asyncio
import math

import focklib
from focklib.problem import Settings


# 閉じた式と比べる時の相対誤差です。
NORM_SLACK = 1e-8
# 点の集合で求めたノルムと閉じた式の一致に使う相対誤差です。
PSD_MATCH = 1e-6
PLAN_KINDS = ("structured", "random")


class Validate:
    def __init__(self, toolkit):
        self.toolkit = toolkit

    async def truncated_norms(self, phi: focklib.AffineMap, degree: int) -> List[float]:
        # 次数ごとの計算は独立しているのでまとめて投げる。
        return list(await asyncio.gather(*(
            self.toolkit.in_executor(focklib.truncated_norm, phi, d)
            for d in range(1, degree + 1)
        )))

    def make_plan(self, phi: focklib.AffineMap, settings: Settings,
                  kind: str) -> focklib.SamplePlan:
        if kind == "random":
            return focklib.random_plan(
                phi.dim, settings.samples, settings.radius, settings.seed)
        return focklib.structured_plan(
            phi, settings.samples, settings.radius, settings.seed, settings.tolerances)

    def psd_search(self, phi: focklib.AffineMap, certificate: focklib.NormCertificate,
                   settings: Settings, kind: str = "structured") -> dict:
        tol = settings.tolerances
        section = {"status": "ok", "plan": kind, "lower_bound": None,
                   "matches_norm": None, "bound_below_norm": None,
                   "random_psd": None, "min_eig": None, "plan_size": 0,
                   "tolerances": {"bisect_tol": settings.bisect_tol, "psd_tol": tol.psd_tol,
                                  "match_rtol": PSD_MATCH}}
        if certificate.bounded and not math.isfinite(certificate.norm):
            section["status"] = "skipped"
            self.toolkit.print("PSD oracle skipped: ‖C_φ‖ overflows a float", title="validate")
            return section
        try:
            plan = self.make_plan(phi, settings, kind)
            section["plan_size"] = len(plan)
            bound = focklib.norm_lower_bound(phi, plan, settings.bisect_tol, tol)
            section["lower_bound"] = bound
            if certificate.bounded:
                section["bound_below_norm"] = bound <= certificate.norm * (1 + PSD_MATCH)
                # 下限が閉じた式の値と一致するのはw₀を含む点の集合だけ。
                if kind == "structured":
                    section["matches_norm"] = abs(bound - certificate.norm) \
                        <= PSD_MATCH * certificate.norm
                check = focklib.psd_certify(
                    phi, certificate.norm * (1 + NORM_SLACK),
                    focklib.random_plan(phi.dim, settings.samples, settings.radius,
                                        settings.seed), tol)
                section["random_psd"], section["min_eig"] = check.psd, check.min_eig
        except focklib.KernelRangeError as e:
            section["status"] = "skipped"
            self.toolkit.print(f"PSD oracle skipped: {e}", title="validate")
        except focklib.InconclusiveError as e:
            section["status"] = "inconclusive"
            self.toolkit.print(f"PSD oracle inconclusive: {e}", title="validate")
        return section

    @staticmethod
    def summary(norms: List[float], certificate: focklib.NormCertificate,
                psd: dict) -> dict:
        monotone = all(
            later >= earlier * (1 - 1e-12) for earlier, later in zip(norms, norms[1:]))
        below: Optional[bool] = None
        if certificate.bounded:
            below = all(value <= certificate.norm * (1 + NORM_SLACK) for value in norms)
        checks = [monotone]
        if certificate.bounded:
            checks.append(below)
            if psd["status"] == "ok":
                checks.extend((psd["bound_below_norm"], psd["random_psd"]))
                if psd["matches_norm"] is not None:
                    checks.append(psd["matches_norm"])
            elif psd["status"] == "inconclusive":
                checks.append(False)
        return {"monotone": monotone, "below_norm": below, "passed": all(checks)}

    @focklib.command("validate", arguments=(
        (("path",), {"help": "problem file"}),
        (("--plan",), {"choices": PLAN_KINDS, "default": "structured"})
    ))
    async def validate(self, args):
        """`classify`の結果を独立した計算で確かめます。

        Notes
        -----
        次数`1..d`の多項式空間に制限した`C_φ`の行列のノルムが単調に増えて閉じた式の値を超えないこと、
        `0`と`w₀`を含む点の集合で半正定値となる最小の`M`が閉じた式の値と一致すること、
        乱数の点の集合で`M = ‖C_φ‖(1 + 10⁻⁸)`の核が半正定値になることを確かめます。

        Parameters
        ----------
        path : str
            問題ファイルです。
        --degree : int, optional
            打ち切る次数です。省略した場合は次元に応じて16、10、6、4のどれかです。
        --plan : str, default structured
            `structured`は`0`と`w₀`を先頭に置いた点の集合、`random`は乱数の点だけの集合です。
            `random`では下限が閉じた式の値を超えないことだけを確かめます。
        --samples, --radius, --seed : optional
            点の集合の作り方です。
        --force : bool
            有界でない場合も実行します。

        Raises
        ------
        2
            ファイルが不正な場合や、`--force`なしで有界でない場合です。
        3
            どれかの確認が失敗した場合です。レポートは出力されます。"""
        classify = self.toolkit.cogs["Classify"]
        problem, settings = await classify.load(args)
        phi = problem.to_map()
        report, certificate = classify.analyse(phi, settings)
        report["command"] = "validate"
        if not certificate.bounded and not settings.force:
            if certificate.membership_residual is None:
                reason = f"‖A‖ = {certificate.operator_norm:.12g} exceeds 1"
            else:
                reason = ("A*b is not in the range of (I - A*A)^(1/2) "
                          f"(membership residual {certificate.membership_residual:.6g})")
            raise focklib.UnboundedError(f"C_φ is unbounded: {reason}; use --force")

        norms, psd = await asyncio.gather(
            self.truncated_norms(phi, settings.degree),
            self.toolkit.in_executor(self.psd_search, phi, certificate, settings, args.plan)
        )
        summary = self.summary(norms, certificate, psd)
        report["oracle"] = {
            "degree": settings.degree,
            "truncated_norms": norms,
            "psd": psd,
            **summary,
            "tolerances": {"norm_rtol": NORM_SLACK, "monotone_rtol": 1e-12}
        }
        self.toolkit.print("pass" if summary["passed"] else "FAIL", title="validate")
        code = self.toolkit.exit_code("ok" if summary["passed"] else "crosscheck")
        return focklib.Outcome(report, code, settings.output)


def setup(toolkit):
    toolkit.add_cog(Validate(toolkit))
