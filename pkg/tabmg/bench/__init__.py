from .plan import *
from .sweep import *
from .report import *
