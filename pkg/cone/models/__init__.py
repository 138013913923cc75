from .triangulation_model import *
from .shape_model import *
from .curve_model import *
from .gluing_model import *
from .angle_model import *
from .parametrization_model import *
from .solver_model import *
