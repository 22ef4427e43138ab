from infomorph.service.app import create_app
from infomorph.service.config import ProviderConfig, ServiceConfig, load_config
from infomorph.service.state import AppState, build_state

__all__ = ["AppState", "ProviderConfig", "ServiceConfig", "build_state", "create_app", "load_config"]
