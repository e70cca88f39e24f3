from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    arrfree_log_level: str = "INFO"
    arrfree_whitney_bound: int = 14  # largest arrangement expanded over all subsets
    arrfree_generic_coefficient_range: int = 5
    arrfree_random_coefficient_range: int = 2
    arrfree_family_max_retries: int = 1000
    arrfree_saito_seed: int = 20040
    arrfree_saito_reseeds: int = 8
    arrfree_jobs: int = 1


@lru_cache
def get_settings():
    return Settings()
