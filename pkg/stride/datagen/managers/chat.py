import logging

import requests

from stride.datagen.exceptions import GeneratorApiException, TransportError
from stride.datagen.managers.base import GeneratorClient


logger = logging.getLogger(__name__)


class ChatCompletionManager(GeneratorClient):
    """
    Talks to an HTTP JSON chat-completion endpoint.
    """

    headers = {
        'Content-Type': 'application/json',
        'Accept': 'application/json',
    }

    def __init__(self, config):
        self.config = config
        self.name = config.model_name

    def get_headers(self):
        headers = dict(self.headers)
        if self.config.credential:
            headers['Authorization'] = 'Bearer %s' % (
                self.config.credential,)
        return headers

    def get_request_data(self, prompt):
        return {
            'model': self.config.model_name,
            'messages': [{'role': 'user', 'content': prompt}],
            'temperature': self.config.temperature,
        }

    def _do_call(self, data):
        try:
            return requests.post(
                self.config.endpoint_url,
                json=data,
                headers=self.get_headers(),
                timeout=self.config.timeout)
        except requests.exceptions.RequestException as e:
            logger.warning('Generator endpoint %s unreachable: %s',
                           self.config.endpoint_url, e)
            raise TransportError(
                'Generator endpoint %s unreachable: %s' % (
                    self.config.endpoint_url, e))

    def complete(self, prompt, problem_id=None):
        """
        Posts ``prompt`` as a single user message and returns the
        assistant text.

        :param prompt str: the full prompt
        :param problem_id str: unused
        :returns: str
        """
        resp = self._do_call(self.get_request_data(prompt))

        if resp.status_code != 200:
            try:
                body = resp.json()
            except ValueError:
                body = None
            if isinstance(body, dict) and 'error' in body:
                message = body['error']
            else:
                message = resp.text
            raise GeneratorApiException(
                'Chat completion failed with response: %s - %s' %
                (resp.status_code, message), status_code=resp.status_code)

        try:
            content = resp.json()['choices'][0]['message']['content']
        except (ValueError, KeyError, IndexError, TypeError):
            raise GeneratorApiException(
                'Invalid response from api.', status_code=resp.status_code)
        if not isinstance(content, str):
            raise GeneratorApiException(
                'Invalid response from api.', status_code=resp.status_code)
        return content
