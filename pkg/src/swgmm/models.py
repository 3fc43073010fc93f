"""Modelos Pydantic para configurações e artefatos do swgmm."""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class GradientMode(str, Enum):
    """Forma do gradiente usada pelo otimizador SWM."""

    TRANSPORT = "transport"
    FROZEN = "frozen"


class StepGeometry(str, Enum):
    """Coordenadas em que o RMSProp do SWM atua."""

    SCALED = "scaled"
    EUCLIDEAN = "euclidean"


class FitMethod(str, Enum):
    """Método de ajuste do GMM."""

    SWM = "swm"
    EM = "em"


class SwmConfig(BaseModel):
    """Hiperparâmetros do otimizador sliced-Wasserstein (RMSProp)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    p: float = Field(default=2.0, ge=1.0, description="Ordem da distância de Wasserstein")
    l: int = Field(default=20, ge=1, description="Projeções sorteadas por iteração")
    iters: int = Field(default=2000, ge=1, description="Passos de gradiente")
    quad_points: int = Field(
        default=256, ge=2, description="Nós da quadratura em t por projeção"
    )
    lr: float = Field(default=0.01, gt=0.0, description="Taxa de aprendizado do RMSProp")
    gamma: float = Field(default=0.9, gt=0.0, lt=1.0, description="Decaimento dos momentos")
    kappa: float = Field(default=0.9, ge=0.0, lt=1.0, description="Momentum")
    eps: float = Field(default=1e-8, gt=0.0, description="Guarda do denominador")
    lr_decay: float = Field(
        default=0.01,
        gt=0.0,
        le=1.0,
        description="Fração de lr na última iteração (decaimento exponencial; 1 = constante)",
    )
    max_step: float = Field(
        default=0.25, gt=0.0, description="Limite de cada entrada da velocidade por passo"
    )
    step: StepGeometry = Field(
        default=StepGeometry.SCALED,
        description=(
            "scaled: log-pesos e médias/covariâncias na escala de Σ_k^{1/2}; "
            "euclidean: entradas cruas de α, μ e Σ"
        ),
    )
    eps_var: float = Field(default=1e-6, gt=0.0, description="Piso das variâncias")
    seed: int = Field(default=0, description="Semente de direções e inicialização")
    gradient: GradientMode = Field(
        default=GradientMode.TRANSPORT,
        description="transport: derivada total; frozen: mapas de transporte congelados",
    )
    bandwidth: float = Field(
        default=0.0,
        ge=0.0,
        description="Largura do kernel gaussiano nas fatias dos dados (0 = delta de Dirac)",
    )
    log_every: int = Field(default=10, ge=1, description="Período de registro do trace")


class EmConfig(BaseModel):
    """Hiperparâmetros do EM de referência."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    iters: int = Field(default=500, ge=1, description="Máximo de iterações")
    tol: float = Field(
        default=1e-7, ge=0.0, description="Parada por melhora relativa da NLL"
    )
    eps_var: float = Field(default=1e-6, gt=0.0, description="Piso das variâncias")
    seed: int = Field(default=0, description="Semente da inicialização e reinicializações")


class TraceRecord(BaseModel):
    """Um registro do trace de ajuste."""

    iteration: int = Field(ge=0, description="Iteração registrada")
    objective: float = Field(description="Objetivo do método (SW_p^p ou NLL)")
    nll: float = Field(description="NLL média do modelo nos dados")
    floored: bool = Field(default=False, description="Alguma covariância atingiu o piso")
    reinitialized: bool = Field(
        default=False, description="Algum componente vazio foi reinicializado"
    )


class FitTrace(BaseModel):
    """Trace completo de um ajuste."""

    method: FitMethod = Field(description="Método que gerou o trace")
    records: list[TraceRecord] = Field(default_factory=list, description="Registros")

    def append(self, record: TraceRecord) -> None:
        """Adiciona um registro ao trace."""
        self.records.append(record)

    def to_csv(self) -> str:
        """Serializa como CSV ``iteration,objective,nll``."""
        lines = ["iteration,objective,nll"]
        for record in self.records:
            lines.append(
                f"{record.iteration},{float(record.objective)!r},{float(record.nll)!r}"
            )
        return "\n".join(lines) + "\n"


class GmmDocument(BaseModel):
    """Esquema JSON de um GMM (matrizes em ordem de linhas, simétricas completas)."""

    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=1, description="Dimensão d")
    k: int = Field(ge=1, description="Número de componentes K")
    weights: list[float] = Field(description="Pesos da mistura")
    means: list[list[float]] = Field(description="Médias, K vetores de d entradas")
    covariances: list[list[list[float]]] = Field(description="Covariâncias K×d×d")

    @model_validator(mode="after")
    def _check_shapes(self) -> "GmmDocument":
        if len(self.weights) != self.k or len(self.means) != self.k:
            raise ValueError("weights e means devem ter k entradas")
        if len(self.covariances) != self.k:
            raise ValueError("covariances deve ter k matrizes")
        for mean in self.means:
            if len(mean) != self.dim:
                raise ValueError("cada média deve ter dim entradas")
        for cov in self.covariances:
            if len(cov) != self.dim or any(len(row) != self.dim for row in cov):
                raise ValueError("cada covariância deve ser dim×dim")
        return self


class CompareRun(BaseModel):
    """Resultado de um método em uma execução do experimento de robustez."""

    run: int = Field(ge=0, description="Índice da execução")
    method: FitMethod = Field(description="Método de ajuste")
    nll: float = Field(description="NLL final")
    sw: float = Field(description="Distância sliced-Wasserstein final")
    success: bool = Field(default=False, description="NLL dentro de delta da melhor")


class MethodSummary(BaseModel):
    """Resumo por método do experimento de robustez."""

    method: FitMethod = Field(description="Método de ajuste")
    success_fraction: float = Field(ge=0.0, le=1.0, description="Fração de sucessos")
    median_nll: float = Field(description="Mediana da NLL final")
    median_sw: float = Field(description="Mediana da SW final")


class CompareReport(BaseModel):
    """Relatório do experimento de robustez à inicialização."""

    k: int = Field(ge=1, description="Número de componentes")
    runs: int = Field(ge=1, description="Execuções por método")
    seed: int = Field(description="Semente do experimento")
    delta: float = Field(ge=0.0, description="Tolerância relativa de sucesso")
    best_nll: float = Field(description="Melhor NLL observada por qualquer método")
    records: list[CompareRun] = Field(default_factory=list, description="Registros")
    summary: list[MethodSummary] = Field(default_factory=list, description="Resumo")
    source: Optional[str] = Field(default=None, description="Origem dos dados")
