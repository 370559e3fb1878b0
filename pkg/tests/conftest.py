import warnings

from hypothesis import HealthCheck, settings

settings.register_profile(
    "package",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("package")

# The sandboxed starlette build warns about its bundled test client; the
# warning is environmental, not ours.
warnings.filterwarnings("ignore", message=".*httpx2.*")
