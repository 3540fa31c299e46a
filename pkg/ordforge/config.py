import os
import yaml

from copy import deepcopy
from pathlib import Path
from typing import Any
from typing import Callable
from typing import Collection
from typing import Dict
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Union

from ordforge.orders import BaseOrder
from ordforge.orders import OrderError
from ordforge.orders import parse_order
from ordforge.systems import DENOTED
from ordforge.systems import RELATIVIZED
from ordforge.systems import SYSTEMS

CONFIG_FILE = 'ordforge.yml'

ENV_VARS = {
    'ORDFORGE_DEFAULT_BOUND': 'bound',
    'ORDFORGE_SEED': 'seed',
    'ORDFORGE_FORMAT': 'format',
}

DEFAULTS: Dict[str, Any] = {
    'system': 'eps',
    'base': 'fin:2',
    'bound': 4,
    'seed': 0,
    'format': 'text',
    'levels': 3,
    'denotations': 'identity',
    'witness_bound': 3,
    'depth': 8,
    'trials': 100,
    'max_order': 3,
    'step_budget': 10000,
    'mutation_budget': 64,
    'template': 'eq(0, 0)',
    'debug': False,
    'quiet': False,
}

COUNTS = ('bound', 'levels', 'witness_bound', 'depth', 'trials', 'max_order', 'step_budget',
          'mutation_budget')

FALSE_WORDS = ('0', 'n', 'no', 'false')


class ValidationError(Exception):
    '''Error for validations when validation is failed'''
    pass


class IncompatibleOptionsError(Exception):
    '''Error for option combinations which cannot run together'''
    pass


class Options:
    '''
    Dictionary of options which validates and converts its values.
    '''

    def __init__(self,
                 options: dict,
                 defaults: Optional[Dict[str, Any]] = None,
                 convertors: Optional[Dict[str, Callable]] = None,
                 validators: Optional[Dict[str, Callable]] = None):
        '''
        options (dict)    — options dictionary,
        defaults (dict)   — values for options missing from `options`,
        convertors (dict) — option name → function applied to the value
                            after validation,
        validators (dict) — option name → function which raises
                            ValidationError for a bad value.
        '''
        self.defaults = dict(defaults) if defaults else {}
        self._options = {**self.defaults, **options}
        self._validators = dict(validators) if validators else {}
        self._convertors = dict(convertors) if convertors else {}
        self.validate()
        self._convert()

    @property
    def options(self) -> dict:
        '''Actual options dictionary'''
        return self._options

    def validate(self) -> None:
        '''Run every validator on its option; raises ValidationError naming the option.'''
        for key, validator in self._validators.items():
            if key in self.options:
                try:
                    validator(self.options[key])
                except ValidationError as e:
                    raise ValidationError(f'Error in option "{key}": {e}')

    def _convert(self) -> None:
        for key, convertor in self._convertors.items():
            if key in self.options:
                self.options[key] = convertor(self.options[key])

    def __str__(self):
        return f'<{self.__class__.__name__}{self.options}>'

    def __getitem__(self, ind: str) -> Any:
        return self.options[ind]

    def __setitem__(self, ind: str, val: Any):
        self.options[ind] = val
        self.validate()


class CombinedOptions(Options):
    '''
    Options merged from several named sources. Where sources overlap, the
    sources listed in `priority` win in that order, then the one given first.
    '''

    def __init__(self,
                 options: dict,
                 priority: Optional[Union[str, Sequence[str]]] = None,
                 defaults: Optional[Dict[str, Any]] = None,
                 convertors: Optional[Dict[str, Callable]] = None,
                 validators: Optional[Dict[str, Callable]] = None):
        '''
        :param options:  dictionary where key = source name,
                         value = option dictionary.
        :param priority: source name or list of source names, highest first.

        other parameters are same as in parent
        '''
        self.defaults = dict(defaults) if defaults else {}
        self._options_dict = dict(options) if options else {}
        self._validators = dict(validators) if validators else {}
        self._convertors = dict(convertors) if convertors else {}
        self.priority = priority  # type: ignore

    @property
    def priority(self) -> Sequence[str]:
        return self._priority

    @priority.setter
    def priority(self, val: Union[str, Sequence[str], None]) -> None:
        '''sets new priority and updates active options dictionary'''
        if isinstance(val, str):
            priority_list = [val]
        else:
            priority_list = list(val) if val else []

        for p in priority_list:
            if p not in self._options_dict:
                raise ValueError('Priority must be one of: '
                                 f'{", ".join(self._options_dict.keys())}. '
                                 f'Value received: {p}')
        self._priority = priority_list
        self.set_options()

    def set_options(self) -> None:
        '''Defaults first, then sources outside `priority`, then `priority` from lowest to highest.'''
        self._options = deepcopy(self.defaults)
        for name in reversed(list(self._options_dict)):
            if name not in self.priority:
                self._options.update(self._options_dict[name])
        for name in reversed(self.priority):
            self._options.update(self._options_dict[name])
        self.validate()
        self._convert()


def validate_in(supported: Collection, msg: Optional[str] = None) -> Callable:
    '''
    Validator factory: the option value must be one of `supported`.
    `msg` replaces the default error message.
    '''
    if not hasattr(supported, '__contains__'):
        raise ValueError('`supported` should be a collection')
    message = msg or 'Unsupported option value {val}. Should be one of: {supported}'

    def validate(val: Any) -> None:
        if val not in supported:
            raise ValidationError(message.format(val=val, supported=', '.join(str(s) for s in supported)))
    return validate


def val_type(supported: Union[Sequence[Optional[type]], type, None]) -> Callable:
    '''
    Validator factory for option types: a type, None, or a sequence of
    them where None admits the value None.
    '''
    if supported is None or isinstance(supported, type):
        types: List[Optional[type]] = [supported]
    elif isinstance(supported, Collection):
        types = list(supported)
    else:
        raise ValueError('`supported` should be a type, None or a collection of types')

    def validate(val: Any) -> None:
        if any(val is None if t is None else isinstance(val, t) for t in types):
            return
        raise ValidationError(f'Unsupported option value {val}. '
                              f'Must be of type {", ".join(str(t) for t in types)}')
    return validate


def validate_positive(val: Any) -> None:
    '''Validator for counts: an integer (or integer text) of at least 1'''
    try:
        number = int(val)
    except (TypeError, ValueError):
        raise ValidationError(f'{val} is not an integer')
    if isinstance(val, bool) or number < 1:
        raise ValidationError(f'{val} must be at least 1')


def validate_integer(val: Any) -> None:
    '''Validator for integers given as numbers or text'''
    try:
        int(val)
    except (TypeError, ValueError):
        raise ValidationError(f'{val} is not an integer')


def validate_exists(val: Union[str, Path]) -> None:
    '''Validator that checks if path specified in val exists'''
    MSG = 'Path {val} does not exist.'
    if val and not Path(val).exists():
        raise ValidationError(MSG.format(val=val))


def validate_base_spec(val: Any) -> None:
    '''Validator for base orders: fin:N, omega or list:[a,b,...]'''
    if isinstance(val, BaseOrder):
        return
    try:
        parse_order(str(val))
    except OrderError as e:
        raise ValidationError(str(e))


def int_convertor(option: Any) -> int:
    return int(option)


def base_convertor(option: Union[str, BaseOrder]) -> BaseOrder:
    '''convert an order spec to a BaseOrder'''
    if isinstance(option, BaseOrder):
        return option
    return parse_order(str(option))


def boolean_convertor(option: Any) -> bool:
    '''
    Flags from YAML or the environment: 0, n, no and false (any case) are
    False, other text is True, other values go through bool().
    '''
    if isinstance(option, str):
        return option.lower().strip() not in FALSE_WORDS
    return bool(option)


def env_options(environ: Mapping[str, str]) -> Dict[str, Any]:
    '''Options set through ORDFORGE_* environment variables.'''
    return {key: environ[var] for var, key in ENV_VARS.items() if environ.get(var)}


def load_config_file(path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    '''
    Options from a YAML file; without a path, ordforge.yml in the working
    directory is read if it exists. Dashes in keys become underscores.
    '''
    if path is None:
        if not Path(CONFIG_FILE).exists():
            return {}
        path = CONFIG_FILE
    validate_exists(path)
    with open(path, encoding='utf8') as f:
        data = yaml.load(f, yaml.Loader)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValidationError(f'{path} must contain a mapping of options')
    return {str(key).replace('-', '_'): value for key, value in data.items()}


class CliConfig(CombinedOptions):
    '''
    Options of one CLI run combined from, highest priority first, explicit
    flags, ORDFORGE_* environment variables, the config file and defaults.
    '''

    def __init__(self,
                 cli: Dict[str, Any],
                 environ: Optional[Mapping[str, str]] = None,
                 config_path: Optional[Union[str, Path]] = None):
        cli_options = {k: v for k, v in cli.items() if v is not None}
        sources = {
            'cli': cli_options,
            'env': env_options(os.environ if environ is None else environ),
            'file': load_config_file(config_path),
        }
        validators = {key: validate_positive for key in COUNTS}
        validators.update({
            'system': validate_in(SYSTEMS),
            'seed': validate_integer,
            'format': validate_in(('text', 'json')),
            'base': validate_base_spec,
            'denotations': val_type(str),
            'template': val_type(str),
        })
        convertors: Dict[str, Callable] = {key: int_convertor for key in COUNTS}
        convertors.update({
            'seed': int_convertor,
            'base': base_convertor,
            'debug': boolean_convertor,
            'quiet': boolean_convertor,
        })
        super().__init__(sources,
                         priority=['cli', 'env', 'file'],
                         defaults=DEFAULTS,
                         convertors=convertors,
                         validators=validators)

    def check_compatibility(self, system: Optional[str] = None) -> None:
        '''Raise IncompatibleOptionsError when the system cannot run with these options.'''
        system = system or self['system']
        base = self['base']
        if system in RELATIVIZED and not base.is_finite:
            raise IncompatibleOptionsError(
                f'{system} enumerates over its base; use fin:N or list:[...], not {base.describe()}')
        if system in DENOTED and not self['denotations']:
            raise IncompatibleOptionsError(f'{system} needs --denotations')
