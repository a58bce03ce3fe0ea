import logging
from dataclasses import dataclass, field

import pandas as pd

from .._constants import ClassKeys
from ..csb import csb_sup
from ..space import SpaceDescriptor, structure_report

log = logging.getLogger(__name__)


@dataclass
class Membership:
    tag: str
    member: bool
    evidence: str
    rho: float | None = None


@dataclass
class ClassMembership:
    space_id: str
    memberships: list[Membership] = field(default_factory=list)

    def get(self, tag: str, rho: float | None = None) -> bool:
        for membership in self.memberships:
            if membership.tag == tag and membership.rho == rho:
                return membership.member
        raise KeyError(f"No membership {tag} (rho={rho}) in the report of {self.space_id}")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"class": m.tag, "rho": m.rho, "member": m.member, "evidence": m.evidence} for m in self.memberships]
        )

    def to_dict(self) -> dict:
        return {
            "space": self.space_id,
            "memberships": [
                {"class": m.tag, "rho": m.rho, "member": m.member, "evidence": m.evidence} for m in self.memberships
            ],
        }


def class_report(
    space: SpaceDescriptor, rho_list, samples: int | None = None, seed: int | None = None, **csb_kwargs
) -> ClassMembership:
    """Memberships of a space in pdBW, NORM, IPspace and, for each exponent, in pdBW_rho and NORM_rho

    All memberships are sampling evidence: positive definiteness, the triangle inequality and the
    parallelogram identity come from [`structure_report`][bwangle.space.structure_report], the
    exponent classes from the CSB search.
    """
    structure = structure_report(space, samples=samples, seed=seed)
    is_pdbw = structure.is_positive_definite
    is_norm = is_pdbw and structure.triangle_inequality_holds
    is_ip = is_norm and structure.parallelogram_identity_holds

    sampled = f"{structure.sample_count} sampled pairs"
    report = ClassMembership(space_id=space.label)
    report.memberships.append(Membership(ClassKeys.PDBW, is_pdbw, f"positive definite on {sampled}"))
    report.memberships.append(
        Membership(
            ClassKeys.NORM,
            is_norm,
            f"triangle violation {structure.triangle_violation:.3g} on {sampled}"
            + ("" if structure.triangle_witness is None else f", witness {structure.triangle_witness}"),
        )
    )
    report.memberships.append(
        Membership(
            ClassKeys.IP_SPACE,
            is_ip,
            f"parallelogram violation {structure.parallelogram_violation:.3g} on {sampled}",
        )
    )

    for rho in rho_list:
        rho = float(rho)
        if is_pdbw:
            csb = csb_sup(space, rho, seed=seed, **csb_kwargs)
            has = csb.holds
            evidence = f"sup={csb.sup_estimate:.12g} at resolution {csb.grid_resolution}"
        else:
            has, evidence = False, "not positive definite"

        report.memberships.append(Membership(ClassKeys.PDBW_RHO, has, evidence, rho=rho))
        report.memberships.append(Membership(ClassKeys.NORM_RHO, is_norm and has, evidence, rho=rho))

    return report
