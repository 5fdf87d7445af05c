# fockop - Diag

import focklib
from focklib.problem import resolve_settings
from fockutil.presets import build_model, describe, load_presets


class Diag:
    def __init__(self, toolkit):
        self.toolkit = toolkit

    def gap_rows(self, model: focklib.DiagonalModel, rows: int, horizon: int) -> list:
        table = []
        for m in range(1, rows + 1):
            try:
                table.append(focklib.counterexample_gap(model, m, horizon))
            except focklib.InputError:
                # |α_m| = 1の座標にはギャップのベクトルがない。
                table.append({"m": m, "t": None, "gap": None, "full_gap": None,
                              "bound": None})
        return table

    @focklib.command("diag", arguments=(
        (("preset",), {"help": "preset name or inline"}),
        (("parameters",), {"nargs": "*", "help": "key=value overrides"}),
        (("--horizon",), {"type": int})
    ))
    async def diag(self, args):
        """対角作用素のモデルで有界性の級数を調べます。

        Notes
        -----
        `Σ |α_m b_m|² / (1 - |α_m|²)`の部分和と、その収束の判定、
        `m <= min(N, 50)`でのギャップ`‖φ(t_m v_m)‖² - ‖t_m v_m‖²`の表を出力します。
        収束する場合はノルムと残りの和の見積もりも出力します。

        Parameters
        ----------
        preset : str
            `paper-counterexample`、`geometric`、`constant`、`inline`のどれかです。
        parameters : str, optional
            `a=0.5`、`r=0.5`のような上書きです。`inline`では`alpha=0.5,0.5 b=1,0`のように書きます。
        --horizon : int, default 1000
            数列を評価する長さです。

        Examples
        --------
        diag paper-counterexample --horizon 1000
        diag constant a=0.5

        Raises
        ------
        2
            知らないプリセットやパラメータの場合です。"""
        flags = self.toolkit.flags(args)
        flags["horizon"] = args.horizon
        settings = resolve_settings(self.toolkit.data, None, flags)
        presets = load_presets(args.presets or self.toolkit.data["presets"])
        model = build_model(args.preset, args.parameters, presets, settings.horizon)
        series = focklib.series_criterion(
            model, settings.horizon, settings.threshold, settings.growth_exponent)
        self.toolkit.print(f"{model.name}: {series.verdict} ({series.evidence})",
                           title="diag")

        norm = None
        if series.verdict == "converging":
            try:
                result = focklib.diag_norm(
                    model, settings.horizon, threshold=settings.threshold,
                    growth_exponent=settings.growth_exponent)
                norm = {"value": result.norm, "log": result.log_norm,
                        "tail_bound": result.tail_bound, "b_norm_sq": result.b_norm_sq}
            except focklib.InconclusiveError as e:
                self.toolkit.print(str(e), title="diag")
        rows = min(settings.horizon, self.toolkit.data["diagonal"]["gap_rows"])
        report = {
            "tool": {"name": self.toolkit.name, "version": focklib.__version__},
            "command": "diag",
            "seed": settings.seed,
            "model": describe(args.preset, args.parameters, presets),
            "series": {
                "horizon": settings.horizon,
                "partial_sums": series.partial_sums,
                "verdict": series.verdict,
                "evidence": series.evidence,
                "tail_bound": series.tail_bound,
                "cms_vacuous": focklib.cms_vacuous(model, settings.horizon),
                "tolerances": {"threshold": settings.threshold,
                               "growth_exponent": settings.growth_exponent}
            },
            "gaps": self.gap_rows(model, rows, settings.horizon),
            "norm": norm
        }
        return focklib.Outcome(report, 0, settings.output)


def setup(toolkit):
    toolkit.add_cog(Diag(toolkit))
