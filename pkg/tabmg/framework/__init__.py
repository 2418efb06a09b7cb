from .eta import *
from .trace import *
from .run import *
