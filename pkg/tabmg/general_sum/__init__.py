from .certified import *
from .oftrl import *
