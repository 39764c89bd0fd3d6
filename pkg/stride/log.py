import copy
import logging
import logging.config

from stride import settings


def configure_logging(verbose=False):
    """
    Applies ``settings.LOGGING``. When ``verbose`` is set the ``stride``
    logger is lowered to DEBUG.

    :param verbose bool: enable debug output
    :returns: dict, the configuration that was applied
    """
    config = copy.deepcopy(settings.LOGGING)
    if verbose:
        config['loggers']['stride']['level'] = 'DEBUG'
    logging.config.dictConfig(config)
    return config
