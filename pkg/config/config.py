# Configuration management
## config/config.py
#!/usr/bin/env python3
import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


@dataclass
class Config:
    group: str = os.getenv("CERT_GROUP", "ortho")
    ring: str = os.getenv("CERT_RING", "zmod:5")
    involution: Optional[str] = os.getenv("CERT_INVOLUTION")
    lam: Optional[str] = os.getenv("CERT_LAMBDA")
    mu: Optional[str] = os.getenv("CERT_MU")
    n: int = int(os.getenv("CERT_N", 3))
    delta: str = os.getenv("CERT_DELTA", "max")
    seed: int = int(os.getenv("CERT_SEED", 0))
    word_length: int = int(os.getenv("CERT_WORD_LENGTH", 12))
    trials: int = int(os.getenv("CERT_TRIALS", 3))

    # Files
    golden_dir: str = os.getenv("CERT_GOLDEN_DIR", "tests/golden")

    log_level: str = os.getenv("LOG_LEVEL", "INFO")


cfg = Config()
