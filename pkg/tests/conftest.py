import sys
from pathlib import Path

# allow `from oracles import ...` inside tests regardless of invocation dir
sys.path.insert(0, str(Path(__file__).parent))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: timing-sensitive or long-running checks")
