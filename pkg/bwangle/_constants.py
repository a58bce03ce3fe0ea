class FamilyKeys:
    HOELDER = "hoelder"
    HEXAGON = "hexagon"
    POLYGON = "polygon"
    RADIAL = "radial"
    PRODUCT = "product"
    LINE = "line"
    PATHOLOGICAL_A = "pathological_a"
    PATHOLOGICAL_B = "pathological_b"
    PATHOLOGICAL_C = "pathological_c"


class ClassKeys:
    PDBW = "pdBW"
    PDBW_RHO = "pdBW_rho"
    NORM = "NORM"
    NORM_RHO = "NORM_rho"
    IP_SPACE = "IPspace"


class AxiomKeys:
    ALL = [f"An{i}" for i in range(1, 12)]
    IDENTITIES = ["An2", "An3", "An4", "An5", "An6", "An7"]
    SEARCHED = ["An8", "An9", "An10"]

    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class CornerKinds:
    CONVEX = "convex"
    CONCAVE = "concave"


class SweepColumns:
    FAMILY_PARAM = "family_param"
    NU = "nu"
    MU = "mu"
    NU_ATTAINED = "nu_attained"
    MU_ATTAINED = "mu_attained"

    @staticmethod
    def rho(value: float) -> str:
        return f"rho={value:.12g}"


class ExitCodes:
    OK = 0
    ANGLE_UNDEFINED = 2
    INVALID_INPUT = 3
    NUMERICAL_FAILURE = 4


COSINE_CLAMP = 1e-12  # cosines in (1, 1 + COSINE_CLAMP] are rounded to 1
ZERO_WEIGHT_FRACTION = 0.01  # above this fraction of zero-weight directions, the weight is not positive definite
HOMOGENEITY_TOL = 1e-12
HOMOGENEITY_FACTORS = (-2.0, -1.0, -0.5, 0.5, 3.0)
