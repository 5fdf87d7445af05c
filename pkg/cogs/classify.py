# fockop - Classify

from typing import Tuple

import focklib
from focklib.problem import ProblemFile, Settings, load_problem, resolve_settings


class Classify:
    def __init__(self, toolkit):
        self.toolkit = toolkit

    async def load(self, args) -> Tuple[ProblemFile, Settings]:
        # problemファイルを読み込んで設定をまとめる。
        problem = await load_problem(args.path)
        settings = resolve_settings(
            self.toolkit.data, problem.options, self.toolkit.flags(args), problem.dim)
        self.toolkit.print(f"Loaded a problem of dimension {problem.dim}.", title="classify")
        return problem, settings

    def analyse(self, phi: focklib.AffineMap, settings: Settings) -> Tuple[dict, focklib.NormCertificate]:
        # 分類とノルムの計算をしてレポートの共通部分を作る。
        tol = settings.tolerances
        certificate = focklib.composition_norm(phi, tol)
        structure = focklib.classify_structure(phi, tol) if certificate.bounded \
            else focklib.StructureReport(False, False, False, False, False)
        cms = focklib.cms_condition_check(phi, tol) \
            if certificate.operator_norm <= 1 + tol.boundary_tol else False
        report = {
            "tool": {"name": self.toolkit.name, "version": focklib.__version__},
            "seed": settings.seed,
            "problem": {"dim": phi.dim},
            "verdicts": {
                "bounded": certificate.bounded,
                "boundary": certificate.boundary,
                "cms_condition": cms,
                **structure._asdict(),
                "tolerances": tol
            },
            "norm": {
                "value": certificate.norm,
                "log": certificate.log_norm,
                "v": certificate.v,
                "w0": certificate.w0,
                "membership_residual": certificate.membership_residual,
                "kernel_residual": certificate.kernel_residual,
                "operator_norm": certificate.operator_norm,
                "tolerances": tol
            }
        }
        return report, certificate

    @focklib.command("classify", arguments=((("path",), {"help": "problem file"}),))
    async def classify(self, args):
        """問題ファイルの`φ(z) = Az + b`について`C_φ`を分類してノルムを求めます。

        Parameters
        ----------
        path : str
            `{"dim": n, "A": [[[re, im], ...], ...], "b": [[re, im], ...], "options": {...}}`の形のファイルです。
        --tol-rank, --tol-psd, --tol-boundary : float, optional
            許容誤差の上書きです。
        --output : str, default json
            `json`か`text`です。

        Returns
        -------
        report
            有界、コンパクト、正規、等長、余等長、ユニタリの判定と`‖C_φ‖`、`v`、`w₀`です。
            有界でないことも結果として返されます。

        Raises
        ------
        2
            ファイルが不正な場合です。
        3
            二つのノルムの式が食い違った場合です。"""
        problem, settings = await self.load(args)
        report, certificate = self.analyse(problem.to_map(), settings)
        report["command"] = "classify"
        self.toolkit.print(
            "bounded" if certificate.bounded else "unbounded", title="classify")
        return focklib.Outcome(report, 0, settings.output)


def setup(toolkit):
    toolkit.add_cog(Classify(toolkit))
