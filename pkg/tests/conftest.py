from hypothesis import HealthCheck, settings

# exact Bernoulli sums get slow for wide products; timing is not what these tests check
settings.register_profile("gamma", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("gamma")
