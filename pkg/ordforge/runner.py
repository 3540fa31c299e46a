'''
Warning and output helpers shared by the check suites and the CLI.
'''
import logging
import traceback

from functools import wraps
from typing import Any
from typing import Callable
from typing import Optional


def output(text: str, quiet: bool = False) -> None:
    '''Print a user-facing line unless quiet.'''
    if not quiet:
        print(text)


def allow_fail(msg: str = 'Check crashed. Recording it as failed.') -> Callable:
    """
    If the decorated check raises, a warning is issued through the runner's
    _warning method and the suite goes on. The check's result is replaced
    with whatever the runner's `failure` method builds for it.
    """

    def decorator(func):
        @wraps(func)
        def wrapper(self, *args, **kwargs) -> Any:
            try:
                return func(self, *args, **kwargs)
            except Exception as e:
                context = ', '.join(str(a) for a in args)
                self._warning(f'{msg} {e}', context=context, error=e)
                return self.failure(func.__name__, *args, error=e)
        return wrapper
    return decorator


class CheckRunner:
    """Base for anything running checks: logging, warnings and quiet/debug handling"""

    def __init__(self,
                 debug: bool = False,
                 quiet: bool = False,
                 logger: Optional[logging.Logger] = None):
        self.debug = debug
        self.quiet = quiet
        self.logger = logger or logging.getLogger(f'ordforge.{self.__class__.__name__.lower()}')
        self.current_check = ''

    def failure(self, check: str, *args, error: Exception) -> Any:
        '''Result standing in for a crashed check.'''
        return None

    def _warning(self,
                 msg: str,
                 context: str = '',
                 error: Optional[Exception] = None,
                 debug_msg: str = '') -> None:
        '''
        Log warning and print to user.

        In debug mode the printed message also gets the context and the
        error traceback.

        :param msg:       — message which should be logged;
        :param context:   — arguments of the failing check. Logged, printed
                            only in debug mode.
        :param error:     — exception which was caught before warning. Its
                            traceback is added to the log message.
        :param debug_msg: — message to additionally print in debug mode.
        '''

        output_message = ''
        if self.current_check:
            output_message += f'[{self.current_check}] '
        output_message += msg + '\n'
        log_message = output_message
        if debug_msg:
            log_message += f'{debug_msg}\n'
        if context:
            log_message += f'Context:\n---\n{context}\n---\n'
        if error:
            tb_str = traceback.format_exception(type(error), error, error.__traceback__)
            log_message += '\n'.join(tb_str)
        if self.debug:
            output_message = log_message
        output(f'WARNING: {output_message}', self.quiet)
        self.logger.warning(log_message)
