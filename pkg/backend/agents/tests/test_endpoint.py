import json
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from unittest import mock

from django.test import SimpleTestCase

from agents.base import Purpose
from agents.endpoint import EndpointAgent
from arena.exceptions import ConfigurationError, EndpointError, TransportError

API_KEY = 'sk-test-7f3a91c2e8'


class StubHandler(BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get('Content-Length', 0))
        self.server.requests.append({
            'path': self.path,
            'headers': dict(self.headers),
            'body': json.loads(self.rfile.read(length) or b'{}'),
        })
        status, payload = self.server.script.pop(0) if self.server.script else (200, None)
        if payload is None:
            payload = {'id': 'cmpl-1', 'choices': [{'message': {'role': 'assistant', 'content': 'ANSWER: 98'}}]}
        body = json.dumps(payload).encode('utf-8') if not isinstance(payload, bytes) else payload
        self.send_response(status)
        self.send_header('Content-Type', 'application/json')
        self.send_header('Content-Length', str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, format, *args):
        pass


class EndpointAgentTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.server = ThreadingHTTPServer(('127.0.0.1', 0), StubHandler)
        cls.server.requests = []
        cls.server.script = []
        cls.thread = threading.Thread(target=cls.server.serve_forever, daemon=True)
        cls.thread.start()
        cls.base_url = f"http://127.0.0.1:{cls.server.server_address[1]}/v1"

    @classmethod
    def tearDownClass(cls):
        cls.server.shutdown()
        cls.server.server_close()
        super().tearDownClass()

    def setUp(self):
        self.server.requests.clear()
        self.server.script.clear()
        self.delays = []
        env = mock.patch.dict(os.environ, {'ARENA_TEST_KEY': API_KEY})
        env.start()
        self.addCleanup(env.stop)

    def make_agent(self, **kwargs):
        options = {
            'name': 'stub',
            'model_name': 'stub-model',
            'base_url': self.base_url,
            'auth_env': 'ARENA_TEST_KEY',
            'temperature': 0.7,
            'max_retries': 3,
            'timeout': 5.0,
            'backoff': 1.0,
            'sleep': self.delays.append,
        }
        options.update(kwargs)
        return EndpointAgent(**options)

    def test_request_shape(self):
        reply = self.make_agent().complete('What is 2 + 96?', purpose=Purpose.SOLVE)
        self.assertEqual(reply, 'ANSWER: 98')
        request = self.server.requests[0]
        self.assertEqual(request['path'], '/v1/chat/completions')
        self.assertEqual(request['headers']['Authorization'], f"Bearer {API_KEY}")
        self.assertEqual(
            request['body'],
            {'model': 'stub-model', 'messages': [{'role': 'user', 'content': 'What is 2 + 96?'}], 'temperature': 0.7},
        )

    def test_rate_limit_retried_with_backoff(self):
        self.server.script.extend([(429, {'error': 'slow down'}), (429, {'error': 'slow down'})])
        reply = self.make_agent().complete('q', purpose=Purpose.SOLVE)
        self.assertEqual(reply, 'ANSWER: 98')
        self.assertEqual(len(self.server.requests), 3)
        self.assertEqual(self.delays, [1.0, 2.0])
        ids = {request['headers']['X-Request-ID'] for request in self.server.requests}
        self.assertEqual(len(ids), 3)

    def test_retries_exhausted(self):
        self.server.script.extend([(503, {'error': 'down'})] * 3)
        with self.assertRaises(TransportError):
            self.make_agent(max_retries=2).complete('q', purpose=Purpose.SOLVE)
        self.assertEqual(len(self.server.requests), 3)

    def test_client_error_not_retried(self):
        self.server.script.append((400, {'error': 'bad request'}))
        with self.assertRaises(EndpointError) as ctx:
            self.make_agent().complete('q', purpose=Purpose.SOLVE)
        self.assertEqual(ctx.exception.status, 400)
        self.assertIn('bad request', ctx.exception.body)
        self.assertEqual(len(self.server.requests), 1)

    def test_malformed_body(self):
        self.server.script.append((200, {'unexpected': True}))
        with self.assertRaises(EndpointError):
            self.make_agent().complete('q', purpose=Purpose.SOLVE)

    def test_missing_key(self):
        with self.assertRaises(ConfigurationError):
            self.make_agent(auth_env='ARENA_TEST_KEY_UNSET').complete('q', purpose=Purpose.SOLVE)
        self.assertEqual(self.server.requests, [])

    def test_unreachable_endpoint(self):
        agent = self.make_agent(base_url='http://127.0.0.1:9/v1', max_retries=1, timeout=0.5)
        with self.assertRaises(TransportError):
            agent.complete('q', purpose=Purpose.SOLVE)
        self.assertEqual(self.delays, [1.0])

    def test_key_never_logged(self):
        self.server.script.extend([(429, {'error': 'slow down'}), (400, {'error': 'nope'})])
        with self.assertLogs('agents.endpoint', level='DEBUG') as logs:
            with self.assertRaises(EndpointError):
                self.make_agent().complete('q', purpose=Purpose.SOLVE)
            self.make_agent().complete('q', purpose=Purpose.SOLVE)
        self.assertTrue(logs.output)
        for line in logs.output:
            self.assertNotIn(API_KEY, line)
