from .algebra import (FieldSpec, Poly, ExtFactType, FactorTable, factor_sieve)
from .arithfun import (parse_function, Values)
from .config import ExperimentConfig
from .errors import (DomainError, InvalidConfig, NumericError, ResourceError)
from .hayes import (HayesModulus, UnitGroup, HayesCharacter)
from .lfunc import (LPolynomial, ThetaClass, theta_class)
from .report import Report
from .symfunc import (Partition, fourier_coefficients)
