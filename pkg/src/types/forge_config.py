from dataclasses import dataclass
from typing import Dict, Optional

from src.types.minimizer_settings import MinimizerSettings
from src.types.solver_settings import SolverSettings
from src.util.errors import Err, ForgeError
from src.util.streamable import Streamable, streamable


@dataclass(frozen=True)
@streamable
class ForgeConfig(Streamable):
    """
    Parameters of one forge run. When target_count_override is None the number of
    states comes from the state count estimate, using spectral_dim and volume (or
    their Weyl law estimates when those are None too).
    """

    target_count_override: Optional[int]
    g_e: float
    seed: int
    spectral_dim: Optional[int]
    volume: Optional[float]
    rank_s: int
    threads: int
    minimizer: MinimizerSettings
    solver: SolverSettings

    def validate(self):
        if self.target_count_override is not None and self.target_count_override < 1:
            raise ForgeError(Err.INVALID_ARGUMENT, ["state count must be >= 1"])
        if self.g_e < 0:
            raise ForgeError(Err.INVALID_ARGUMENT, [f"g_e {self.g_e}"])
        if self.spectral_dim is not None and self.spectral_dim < 1:
            raise ForgeError(Err.INVALID_ARGUMENT, [f"spectral_dim {self.spectral_dim}"])
        if self.volume is not None and not self.volume > 0:
            raise ForgeError(Err.INVALID_ARGUMENT, [f"volume {self.volume}"])
        if self.rank_s < 1 or self.threads < 1:
            raise ForgeError(Err.INVALID_ARGUMENT, ["rank_s and threads must be >= 1"])

    @classmethod
    def from_config(cls, config: Dict, threads: int) -> "ForgeConfig":
        forge = config["forge"]
        return cls(
            forge["target_count_override"],
            float(config["localization"]["g_e"]),
            int(forge["seed"]),
            forge["spectral_dim"],
            None if forge["volume"] is None else float(forge["volume"]),
            int(forge["rank_s"]),
            threads,
            MinimizerSettings.from_config(config["localization"]),
            SolverSettings.from_config(config["solver"]),
        )
