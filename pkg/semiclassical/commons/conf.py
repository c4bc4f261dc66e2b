import os

from ruamel.yaml import YAML, YAMLError

from semiclassical.commons.errors import ConfigError

SECTIONS = {
    'precision': dict,
    'recurrence': dict,
    'catalog': dict,
    'output': str,
    'logging': dict,
}


class Conf:
    def __init__(self, conf_file_path=None):
        """Load the YAML configuration into ``self.d``.

        Without a path the built-in defaults apply and ``d`` stays empty.

        :param conf_file_path: Path to the YAML file
        :type conf_file_path: str
        :raises ConfigError: if the file cannot be read or has the wrong shape
        """
        self.d = {}
        if not conf_file_path:
            return
        conf_file_path = os.path.expanduser(conf_file_path)
        yaml = YAML(typ='safe')
        try:
            with open(conf_file_path) as f:
                d = yaml.load(f)
        except (OSError, YAMLError) as e:
            raise ConfigError('cannot load config file {}: {}'.format(conf_file_path, e), path=conf_file_path)
        if d is None:
            return
        if not isinstance(d, dict):
            raise ConfigError('config file {} must hold a mapping'.format(conf_file_path), path=conf_file_path)
        for key, value in d.items():
            expected = SECTIONS.get(key)
            if expected is None:
                raise ConfigError('unknown config section {!r}'.format(key), section=key)
            if value is not None and not isinstance(value, expected):
                raise ConfigError(
                    'config section {!r} must be a {}'.format(key, expected.__name__), section=key)
        self.d = d
