"""Subcommands of the ``acgb`` driver and the registry they live in."""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Dict, List, Optional

from .compoly import c_buchberger, c_normal_form, c_spoly
from .config import Settings
from .envalg import (
    PbwPoly,
    free_to_pbw,
    left_normal_form,
    left_spoly,
    pbw_generator,
    pbw_mul,
    tailed_commutators,
    two_sided_groebner,
    validate_lie,
)
from .exceptions import ProblemError
from .freealg import (
    NcPoly,
    graded_quotient_is_commutative,
    lh,
    nc_complete_bounded,
    nc_is_groebner,
    nc_normal_form,
)
from .liftkit import Stage, gamma, pipeline, stage_errors
from .logging_config import get_logger
from .render import Outcome

if TYPE_CHECKING:
    from .cli import Problem

logger = get_logger(__name__)

Handler = Callable[["Problem", Settings], Outcome]


@dataclass
class CommandDefinition:
    """A subcommand: name, one-line help and the handler computing its outcome."""

    name: str
    help: str
    handler: Handler
    needs_lie: bool = False

    def __call__(self, problem: "Problem", settings: Settings) -> Outcome:
        if self.needs_lie and problem.mode != "lie":
            raise ProblemError(f"'{self.name}' needs a Lie-mode problem (bracket lines or 'mode lie')")
        return self.handler(problem, settings)


class CommandRegistry:
    """Registry for all available subcommands."""

    _commands: Dict[str, CommandDefinition] = {}

    @classmethod
    def register(cls, definition: CommandDefinition) -> None:
        if definition.name in cls._commands:
            logger.warning("Command %s is already registered. Overwriting.", definition.name)
        cls._commands[definition.name] = definition
        logger.debug("Registered command: %s", definition.name)

    @classmethod
    def get(cls, name: str) -> Optional[CommandDefinition]:
        return cls._commands.get(name)

    @classmethod
    def names(cls) -> List[str]:
        return list(cls._commands)

    @classmethod
    def definitions(cls) -> List[CommandDefinition]:
        return list(cls._commands.values())


def command(name: str, help: str, needs_lie: bool = False) -> Callable[[Handler], Handler]:
    """Register the decorated function as subcommand ``name``."""

    def decorator(func: Handler) -> Handler:
        CommandRegistry.register(CommandDefinition(name, help, func, needs_lie))
        return func

    return decorator


def _relations(problem: "Problem") -> List[NcPoly]:
    """Free-algebra relations of a problem: the written ones, preceded by the
    defining relations of ``U(g)`` in Lie mode."""
    written = [g for g in problem.generators if g]
    if problem.mode == "lie":
        return tailed_commutators(problem.lie()) + written
    return written


@command("pipeline", "Finite Groebner basis of the preimage of an ideal of U(g)", needs_lie=True)
def run_pipeline(problem: "Problem", settings: Settings) -> Outcome:
    trace = pipeline(problem.lie(), list(problem.generators), problem.order, settings)
    outcome = Outcome(
        "pipeline", stages=trace.stages, notes=list(trace.notes), basis_change=trace.basis_change)
    if trace.verification is not None:
        outcome.checks = dict(trace.verification.checks)
        outcome.failures = dict(trace.verification.failures)
        outcome.certificate = trace.verification.certificate
    return outcome


@command("comgb", "Reduced commutative Groebner basis of the abelianized generators")
def run_comgb(problem: "Problem", settings: Settings) -> Outcome:
    order = problem.order
    F = [f for f in (gamma(g) for g in problem.generators) if f]
    with stage_errors("commutative_basis"):
        G = c_buchberger(F, order, True, settings.term_cap)
    outcome = Outcome("comgb", stages=[Stage("commutative_basis", "commutative", G)])
    if settings.verify:
        with stage_errors("verification"):
            outcome.checks = {
                "s_polynomials_reduce": all(
                    not c_normal_form(c_spoly(G[i], G[j], order), G, order, settings.term_cap)
                    for i in range(len(G)) for j in range(i + 1, len(G))
                ),
                "generators_reduce_to_zero": all(
                    not c_normal_form(f, G, order, settings.term_cap) for f in F
                ),
            }
    return outcome


@command("envgb", "Two-sided Groebner basis in the enveloping algebra", needs_lie=True)
def run_envgb(problem: "Problem", settings: Settings) -> Outcome:
    L, order = problem.lie(), problem.order
    with stage_errors("input"):
        validate_lie(L)
    with stage_errors("two_sided_basis"):
        F = [free_to_pbw(L, g) for g in problem.generators]
        G = two_sided_groebner(L, F, order, settings.term_cap, settings.basis_cap)
    outcome = Outcome("envgb", stages=[Stage("two_sided_basis", "pbw", G)])
    if settings.verify:
        with stage_errors("verification"):
            def nf(p: PbwPoly) -> PbwPoly:
                return left_normal_form(L, p, G, order, settings.term_cap)

            outcome.checks = {
                "left_s_polynomials_reduce": all(
                    not nf(left_spoly(L, G[i], G[j], order))
                    for i in range(len(G)) for j in range(i + 1, len(G))
                ),
                "right_multiples_reduce": all(
                    not nf(pbw_mul(L, g, pbw_generator(L, k))) for g in G for k in range(L.dim)
                ),
                "generators_reduce_to_zero": all(not nf(f) for f in F),
            }
    return outcome


@command("freegb", "Degree-bounded completion in the free algebra")
def run_freegb(problem: "Problem", settings: Settings) -> Outcome:
    order = problem.order
    if problem.mode == "lie":
        with stage_errors("input"):
            validate_lie(problem.lie())
    with stage_errors("bounded_completion"):
        result = nc_complete_bounded(
            _relations(problem), order, settings.max_degree, settings.term_cap, settings.basis_cap)
    outcome = Outcome(
        "freegb", stages=[Stage("bounded_completion", "free", result.basis)], complete=result.complete)
    if not result.complete:
        outcome.notes.append(
            f"{len(result.unresolved)} ambiguities above degree {settings.max_degree} are unresolved")
    if settings.verify:
        with stage_errors("verification"):
            outcome.certificate = nc_is_groebner(result.basis, order, settings.workers, settings.term_cap)
            relations = _relations(problem)
            outcome.checks = {
                "is_groebner": outcome.certificate.is_groebner,
                "generators_reduce_to_zero": all(
                    not nc_normal_form(f, result.basis, order, settings.term_cap) for f in relations
                ),
            }
    return outcome


@command("check", "Diamond-lemma check of given relations and their graded quotient")
def run_check(problem: "Problem", settings: Settings) -> Outcome:
    order = problem.order
    relations = [r.monic(order) for r in _relations(problem)]
    outcome = Outcome("check", stages=[Stage("relations", "free", relations)])
    with stage_errors("verification"):
        cert = nc_is_groebner(relations, order, settings.workers, settings.term_cap)
        outcome.certificate = cert
        outcome.checks = {"is_groebner": cert.is_groebner}
        if not cert:
            return outcome
        parts = [lh(r) for r in relations]
        commutative = graded_quotient_is_commutative(parts, order, settings.term_cap)
        outcome.checks["graded_quotient_commutative"] = commutative
    if commutative:
        outcome.stages.append(Stage("leading_homogeneous", "free", parts))
        with stage_errors("graded_basis"):
            abelianized = [f for f in (gamma(p) for p in parts) if f]
            graded = c_buchberger(abelianized, order, True, settings.term_cap)
            outcome.stages.append(Stage("graded_basis", "commutative", graded))
    else:
        outcome.notes.append("the associated graded algebra is not commutative")
    return outcome
