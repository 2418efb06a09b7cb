from .config import *
from .default_configs import *
from .tracker import *
from .user_settings import load_user_settings
