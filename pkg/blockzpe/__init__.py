from .common import *
from .workspace import *

from .materials import *
from .greenfn import *
from .spectra import *
from .quadrature import *
from .modealg import *

from .runconfig import *
from .dataset import *
from .verify import *

BLOCKZPE_VERSION = "0.1.0"
