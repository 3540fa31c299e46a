from pathlib import Path
from unittest import TestCase
from unittest.mock import Mock

from ordforge.config import CliConfig
from ordforge.config import CombinedOptions
from ordforge.config import IncompatibleOptionsError
from ordforge.config import Options
from ordforge.config import ValidationError
from ordforge.config import base_convertor
from ordforge.config import boolean_convertor
from ordforge.config import env_options
from ordforge.config import load_config_file
from ordforge.config import val_type
from ordforge.config import validate_base_spec
from ordforge.config import validate_exists
from ordforge.config import validate_in
from ordforge.config import validate_positive
from ordforge.orders import finite

from .utils import chcwd


class TestOptions(TestCase):
    def test_no_processing(self):
        original = {'key': 'val', 'int': 12, 'bool': True}
        options = Options(original)

        self.assertEqual(options.options, original)

    def test_defaults(self):
        original = {'key': 'val', 'int': 12, 'bool': True, 'overridden': 42}
        defaults = {'defaultkey': 'defaultvalue', 'overridden': 0}

        expected = {'key': 'val', 'int': 12, 'bool': True, 'overridden': 42, 'defaultkey': 'defaultvalue'}
        options = Options(original, defaults=defaults)
        self.assertEqual(options.defaults, defaults)
        self.assertEqual(options.options, expected)

    def test_validate(self):
        mock_validator = Mock(return_value=None)
        options = Options({'key': 'val', 'int': 12}, validators={'key': mock_validator})

        self.assertEqual(options['key'], 'val')
        mock_validator.assert_called_once_with('val')

    def test_validation_error(self):
        mock_validator = Mock(side_effect=[ValidationError])
        with self.assertRaises(ValidationError):
            Options({'int': 12}, validators={'int': mock_validator})

    def test_convert(self):
        mock_convertor = Mock(return_value='converted')
        options = Options({'key': 'val', 'int': 12}, convertors={'int': mock_convertor})

        self.assertEqual(options['int'], 'converted')
        mock_convertor.assert_called_once_with(12)

    def test_setitem_validates(self):
        options = Options({'bound': 3}, validators={'bound': validate_positive})
        with self.assertRaises(ValidationError):
            options['bound'] = 0


class TestCombinedOptions(TestCase):
    def test_combine_override(self):
        options1 = {'key1': 'val1', 'key2': 'val2'}
        options2 = {'key2': 'val21', 'key4': 'val4'}
        coptions = CombinedOptions({'o1': options1, 'o2': options2})

        expected = {**options2, **options1}
        self.assertEqual(coptions.options, expected)

    def test_priority_list(self):
        options1 = {'key1': 'val1', 'key2': 'val2', 'key3': 'val3'}
        options2 = {'key2': 'val22', 'key3': 'val32', 'key4': 'val42'}
        options3 = {'key2': 'val23', 'key4': 'val43'}
        expected = {'key1': 'val1', 'key2': 'val23', 'key3': 'val32', 'key4': 'val43'}
        coptions = CombinedOptions(
            {'o1': options1, 'o2': options2, 'o3': options3},
            priority=['o3', 'o2']
        )

        self.assertEqual(coptions.options, expected)

        coptions.priority = 'o1'
        self.assertEqual(coptions['key2'], 'val2')

    def test_unknown_priority(self):
        with self.assertRaises(ValueError):
            CombinedOptions({'o1': {}}, priority='o2')


class TestValidators(TestCase):
    def test_validate_in(self):
        validator = validate_in(['eps', 'phi'])
        validator('eps')
        with self.assertRaises(ValidationError):
            validator('zeta')

    def test_validate_in_custom_message(self):
        validator = validate_in([1, 2, 3], msg='Custom message')
        with self.assertRaises(ValidationError) as caught:
            validator('Unsupported')

        self.assertEqual(str(caught.exception), 'Custom message')

    def test_val_type(self):
        val_type(str)('identity')
        val_type([str, None])(None)
        with self.assertRaises(ValidationError):
            val_type(str)(1)
        with self.assertRaises(ValidationError):
            val_type((str, int))(1.12)

    def test_validate_positive(self):
        for val in (1, '4', 100):
            validate_positive(val)
        for val in (0, -3, 'four', True, None):
            with self.assertRaises(ValidationError):
                validate_positive(val)

    def test_validate_exists(self):
        validate_exists('README.md')
        validate_exists(Path('README.md'))
        with self.assertRaises(ValidationError):
            validate_exists(Path('wrong.exe'))

    def test_validate_base_spec(self):
        for val in ('fin:3', 'omega', 'list:[a,b]', finite(2)):
            validate_base_spec(val)
        with self.assertRaises(ValidationError):
            validate_base_spec('fin:x')


class TestConvertors(TestCase):
    def test_boolean_true(self):
        for val in ['1', 'y', 'yes', 'true', True]:
            self.assertTrue(boolean_convertor(val))

    def test_boolean_false(self):
        for val in ['0', 'n', 'no', 'false', False]:
            self.assertFalse(boolean_convertor(val))

    def test_boolean_other(self):
        self.assertFalse(boolean_convertor(0))
        self.assertFalse(boolean_convertor([]))
        self.assertTrue(boolean_convertor(12))
        self.assertTrue(boolean_convertor('random string'))

    def test_base(self):
        self.assertEqual(base_convertor('fin:3'), finite(3))
        order = finite(2)
        self.assertIs(base_convertor(order), order)


class TestSources(TestCase):
    def test_env_options(self):
        environ = {'ORDFORGE_DEFAULT_BOUND': '6', 'ORDFORGE_FORMAT': 'json', 'HOME': '/root'}
        self.assertEqual(env_options(environ), {'bound': '6', 'format': 'json'})

    def test_no_config_file(self):
        with chcwd('test'):
            self.assertEqual(load_config_file(), {})

    def test_config_file_in_cwd(self):
        with chcwd('test/test_data/config'):
            options = load_config_file()
        self.assertEqual(options['system'], 'phi')
        self.assertEqual(options['witness_bound'], 2)

    def test_missing_config_file(self):
        with self.assertRaises(ValidationError):
            load_config_file('test/test_data/config/missing.yml')


class TestCliConfig(TestCase):
    def test_defaults(self):
        with chcwd('test'):
            config = CliConfig({}, environ={})
        self.assertEqual(config['system'], 'eps')
        self.assertEqual(config['base'], finite(2))
        self.assertEqual(config['bound'], 4)
        self.assertEqual(config['max_order'], 3)
        self.assertFalse(config['debug'])

    def test_none_values_ignored(self):
        with chcwd('test'):
            config = CliConfig({'bound': None, 'system': 'gamma'}, environ={})
        self.assertEqual(config['bound'], 4)
        self.assertEqual(config['system'], 'gamma')

    def test_priority(self):
        environ = {'ORDFORGE_DEFAULT_BOUND': '6', 'ORDFORGE_SEED': '11'}
        with chcwd('test/test_data/config'):
            config = CliConfig({'seed': 5}, environ=environ)

        self.assertEqual(config['seed'], 5)      # flag over env and file
        self.assertEqual(config['bound'], 6)     # env over file
        self.assertEqual(config['system'], 'phi')
        self.assertEqual(config['witness_bound'], 2)
        self.assertEqual(config['template'], 'nin(0, X)')

    def test_explicit_config_path(self):
        with chcwd('test'):
            config = CliConfig({}, environ={}, config_path='test_data/config/ordforge.yml')
        self.assertEqual(config['bound'], 3)

    def test_invalid_values(self):
        with chcwd('test'):
            with self.assertRaises(ValidationError):
                CliConfig({'bound': 0}, environ={})
            with self.assertRaises(ValidationError):
                CliConfig({'system': 'zeta'}, environ={})
            with self.assertRaises(ValidationError):
                CliConfig({'max_order': 0}, environ={})
            with self.assertRaises(ValidationError):
                CliConfig({}, environ={'ORDFORGE_FORMAT': 'xml'})

    def test_compatibility(self):
        with chcwd('test'):
            CliConfig({'base': 'fin:3'}, environ={}).check_compatibility()
            CliConfig({'system': 'theta', 'base': 'omega'}, environ={}).check_compatibility()
            config = CliConfig({'base': 'omega'}, environ={})
        with self.assertRaises(IncompatibleOptionsError):
            config.check_compatibility()
        with self.assertRaises(IncompatibleOptionsError):
            config.check_compatibility('om-x')
