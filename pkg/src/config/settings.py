import os

# Application settings
APP_NAME = "EKR Lab"
APP_VERSION = "1.0.0"
SCHEMA_VERSION = 1

# Directory settings
BASE_DIR = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
DATA_DIR = os.path.join(BASE_DIR, 'data')


def _env_number(name, default, cast):
    value = os.environ.get(name)
    if value is None or value.strip() == '':
        return default
    try:
        return cast(value)
    except ValueError:
        raise ValueError(f"Environment variable {name} must be a number, got {value!r}")


# Budget settings (CLI flags override these, env vars override the defaults)
DEFAULT_TIME_BUDGET = _env_number('EKRLAB_TIME_BUDGET', 60.0, float)  # seconds per solve
DEFAULT_ELEMENT_CAP = _env_number('EKRLAB_ELEMENT_CAP', 200_000, int)  # group enumeration
DEFAULT_ENUM_CAP = _env_number('EKRLAB_ENUM_CAP', 1_000_000, int)  # enumerated maxima
DEFAULT_WORKERS = _env_number('EKRLAB_WORKERS', 1, int)

# Graph settings
SPECTRUM_VERTEX_CAP = 2000
ADJACENCY_VERTEX_CAP = 100_000
SPECTRUM_TOLERANCE = 1e-6  # absolute, scaled by the graph degree

# Fixture settings
M20_FIXTURE = os.path.join(DATA_DIR, 'm20.gens')
AGL_FIXTURES = {
    q: os.path.join(DATA_DIR, f'agl1_{q}.gens') for q in (5, 7, 11, 13)
}
M20_ORDER = 960
M20_DEGREE = 20
M20_STABILIZER = 48
M20_BLOCK_SHAPE = (5, 4)  # blocks, block size
M20_WITNESS_SIZE = 64

# Logging settings
LOG_LEVEL = os.environ.get('EKRLAB_LOG_LEVEL', 'INFO')
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

# Verdict settings
INTERSECTION_CHECK_ORDER = 720  # tight clique-coclique cross check up to this group order
INTERSECTION_CHECK_CAP = 2000  # maxima enumerated per side for that check
