"""Rain-attenuation-assisted eavesdropping on mmWave D2D links."""

from .channel import (
    LinkConfig,
    Scenario,
    ShadowingModel,
    capacity_bps,
    energy_efficiency,
    path_gain_constant,
    path_loss_db,
    shadowing_value,
    snr_db,
)
from .config import Config, load_config, save_config
from .errors import ConfigError, DomainError, SearchExhaustedError, ValidationError
from .rain import RainConfig, power_law_coefficients, specific_attenuation
from .secrecy import AttackMode, required_ar_attenuation, secrecy_capacity

__version__ = "0.1.0"
